// ===== result serialization =====

#include "nlfb/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "nlfb/errors.hpp"

namespace nlfb {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open for writing: " + path.string());
    out << text;
    out.flush();
    if (!out) throw ConfigError("write failed: " + path.string());
}

}  // namespace

std::string outcome_label(Outcome o) {
    switch (o) {
        case Outcome::Vanishing: return "vanishing";
        case Outcome::Spreading: return "spreading";
        default: return "undecided";
    }
}

Outcome outcome_from_label(const std::string& label) {
    if (label == "vanishing") return Outcome::Vanishing;
    if (label == "spreading") return Outcome::Spreading;
    if (label == "undecided") return Outcome::Undecided;
    throw ConfigError("unknown outcome label: " + label);
}

std::string timeseries_csv(const Trajectory& traj) {
    std::string s = "t,g,h,h_rate,g_rate,max_u,mass\n";
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        s += fmt(traj.t[i]);
        s += ',';
        s += fmt(traj.g[i]);
        s += ',';
        s += fmt(traj.h[i]);
        s += ',';
        s += fmt(traj.h_rate[i]);
        s += ',';
        s += fmt(traj.g_rate[i]);
        s += ',';
        s += fmt(traj.max_w[i]);
        s += ',';
        s += fmt(traj.mass[i]);
        s += '\n';
    }
    return s;
}

std::string snapshots_csv(const Trajectory& traj) {
    std::string s = "t,x,u\n";
    for (const Snapshot& snap : traj.snapshots) {
        for (Eigen::Index i = 0; i < snap.x.size(); ++i) {
            s += fmt(snap.t);
            s += ',';
            s += fmt(snap.x[i]);
            s += ',';
            s += fmt(snap.u[i]);
            s += '\n';
        }
    }
    return s;
}

std::string summary_json(const RunSummary& summary) {
    ordered_json j = ordered_json::object();
    if (summary.outcome) j["outcome"] = outcome_label(*summary.outcome);
    if (summary.h_slope) j["h_slope"] = *summary.h_slope;
    if (summary.g_slope) j["g_slope"] = *summary.g_slope;
    if (summary.lambda_p) j["lambda_p"] = *summary.lambda_p;
    if (summary.h_star) j["h_star"] = *summary.h_star;
    if (summary.mu_star_bracket)
        j["mu_star_bracket"] = {summary.mu_star_bracket->first, summary.mu_star_bracket->second};
    if (summary.c_l) j["c_l"] = *summary.c_l;
    if (summary.c_star) j["c_star"] = *summary.c_star;
    if (summary.c_r) j["c_r"] = *summary.c_r;
    if (summary.c_tilde) {
        if (summary.c_tilde->finite)
            j["c_tilde"] = summary.c_tilde->value;
        else
            j["c_tilde"] = nullptr;
    }
    if (summary.wall_time) j["wall_time"] = *summary.wall_time;
    return j.dump(2) + "\n";
}

RunSummary parse_summary_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("summary parse error: ") + e.what());
    }
    RunSummary s;
    if (j.contains("outcome")) s.outcome = outcome_from_label(j["outcome"].get<std::string>());
    if (j.contains("h_slope")) s.h_slope = j["h_slope"].get<double>();
    if (j.contains("g_slope")) s.g_slope = j["g_slope"].get<double>();
    if (j.contains("lambda_p")) s.lambda_p = j["lambda_p"].get<double>();
    if (j.contains("h_star")) s.h_star = j["h_star"].get<double>();
    if (j.contains("mu_star_bracket")) {
        const auto& b = j["mu_star_bracket"];
        if (!b.is_array() || b.size() != 2)
            throw ConfigError("summary: mu_star_bracket must be a pair");
        s.mu_star_bracket = std::make_pair(b[0].get<double>(), b[1].get<double>());
    }
    if (j.contains("c_l")) s.c_l = j["c_l"].get<double>();
    if (j.contains("c_star")) s.c_star = j["c_star"].get<double>();
    if (j.contains("c_r")) s.c_r = j["c_r"].get<double>();
    if (j.contains("c_tilde")) {
        if (j["c_tilde"].is_null())
            s.c_tilde = Moment::infinite();
        else
            s.c_tilde = Moment::of(j["c_tilde"].get<double>());
    }
    if (j.contains("wall_time")) s.wall_time = j["wall_time"].get<double>();
    return s;
}

void write_outputs(const RunSummary& summary, const Trajectory* traj, const std::string& dir) {
    std::error_code ec;
    const std::filesystem::path root(dir);
    std::filesystem::create_directories(root, ec);
    if (ec) throw ConfigError("cannot create output directory " + root.string() + ": " + ec.message());
    write_file(root / "summary.json", summary_json(summary));
    if (traj != nullptr) {
        write_file(root / "timeseries.csv", timeseries_csv(*traj));
        write_file(root / "snapshots.csv", snapshots_csv(*traj));
    }
}

}  // namespace nlfb
