// ===== experiment configuration =====

#include "nlfb/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "nlfb/errors.hpp"

namespace nlfb {

namespace {

using json = nlohmann::json;

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError("config: " + path + " must be an object");
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) ok = true;
        if (!ok) throw ConfigError("config: unknown key " + path + "." + item.key());
    }
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError("config: " + path + " must be a number");
    return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError("config: " + path + " must be an integer");
    return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError("config: " + path + " must be a string");
    return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError("config: " + path + " must be a boolean");
    return j.get<bool>();
}

std::vector<double> as_number_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError("config: " + path + " must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

double parse_num_token(const std::string& tok, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw ConfigError("invalid number '" + tok + "' in " + what);
    }
    if (pos != tok.size()) throw ConfigError("invalid number '" + tok + "' in " + what);
    return v;
}

Kernel kernel_from_json(const json& j, const std::string& path) {
    if (j.is_string()) return parse_kernel_spec(j.get<std::string>());
    require_object(j, path);
    check_keys(j, {"type", "params"}, path);
    if (!j.contains("type")) throw ConfigError("config: " + path + " needs a type");
    const std::string type = as_string(j.at("type"), path + ".type");
    const json params = j.contains("params") ? j.at("params") : json::object();
    const std::string ppath = path + ".params";
    require_object(params, ppath);
    auto num_or = [&](const char* key, double dflt) {
        return params.contains(key) ? as_number(params.at(key), ppath + "." + key) : dflt;
    };
    if (type == "gaussian") {
        check_keys(params, {"sigma"}, ppath);
        return Kernel::gaussian(num_or("sigma", 1.0));
    }
    if (type == "laplace") {
        check_keys(params, {"beta"}, ppath);
        return Kernel::laplace(num_or("beta", 1.0));
    }
    if (type == "bump") {
        check_keys(params, {"radius"}, ppath);
        return Kernel::bump(num_or("radius", 1.0));
    }
    if (type == "power3") {
        check_keys(params, {}, ppath);
        return Kernel::power_cubic();
    }
    if (type == "power2") {
        check_keys(params, {}, ppath);
        return Kernel::power_quadratic();
    }
    if (type == "cutoff") {
        check_keys(params, {"radius", "base"}, ppath);
        if (!params.contains("radius") || !params.contains("base"))
            throw ConfigError("config: " + ppath + " needs radius and base");
        const Kernel base = kernel_from_json(params.at("base"), ppath + ".base");
        return Kernel::cutoff(base, as_number(params.at("radius"), ppath + ".radius"));
    }
    throw ConfigError("config: " + path + ".type unknown kernel type '" + type + "'");
}

// reaction is a string next to an optional sibling eps inside the solver block:
// {"reaction": "logistic"} or {"reaction": "logistic_upper", "eps": 0.1};
// compact "logistic_upper:0.1" also works.
Reaction reaction_from_solver(const json& s) {
    const std::string spec = as_string(s.at("reaction"), "solver.reaction");
    if (spec.find(':') != std::string::npos) {
        if (s.contains("eps"))
            throw ConfigError(
                "config: solver.eps conflicts with the eps embedded in solver.reaction");
        return parse_reaction_spec(spec);
    }
    if (spec == "logistic") {
        if (s.contains("eps"))
            throw ConfigError("config: solver.eps needs a perturbed reaction family");
        return Reaction::logistic();
    }
    if (spec == "logistic_upper" || spec == "logistic_lower") {
        if (!s.contains("eps"))
            throw ConfigError("config: reaction '" + spec + "' needs solver.eps");
        const double eps = as_number(s.at("eps"), "solver.eps");
        return spec == "logistic_upper" ? Reaction::logistic_upper(eps)
                                        : Reaction::logistic_lower(eps);
    }
    throw ConfigError("config: solver.reaction unknown reaction '" + spec + "'");
}

InitialProfile profile_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j, {"type", "amplitude", "values"}, path);
    if (!j.contains("type")) throw ConfigError("config: " + path + " needs a type");
    const std::string type = as_string(j.at("type"), path + ".type");
    if (type == "parabolic") {
        check_keys(j, {"type", "amplitude"}, path);
        const double amp =
            j.contains("amplitude") ? as_number(j["amplitude"], path + ".amplitude") : 1.0;
        return InitialProfile::parabolic(amp);
    }
    if (type == "custom") {
        check_keys(j, {"type", "values"}, path);
        if (!j.contains("values")) throw ConfigError("config: " + path + " needs values");
        return InitialProfile::custom(as_number_array(j["values"], path + ".values"));
    }
    throw ConfigError("config: " + path + ".type unknown profile type '" + type + "'");
}

ExperimentKind experiment_from_string(const std::string& s) {
    if (s == "simulate") return ExperimentKind::Simulate;
    if (s == "eigen") return ExperimentKind::Eigen;
    if (s == "critical_length") return ExperimentKind::CriticalLength;
    if (s == "semiwave") return ExperimentKind::SemiWave;
    if (s == "speeds") return ExperimentKind::Speeds;
    if (s == "dichotomy_scan") return ExperimentKind::DichotomyScan;
    if (s == "acceleration_check") return ExperimentKind::AccelerationCheck;
    if (s == "vanishing_bound") return ExperimentKind::VanishingBound;
    throw ConfigError("config: unknown experiment '" + s + "'");
}

DriftMode mode_from_string(const std::string& s, const std::string& path) {
    if (s == "right" || s == "rightward") return DriftMode::Rightward;
    if (s == "neutral") return DriftMode::Neutral;
    if (s == "left" || s == "leftward") return DriftMode::Leftward;
    throw ConfigError("config: " + path + " unknown drift mode '" + s + "'");
}

void require_increasing(const std::vector<double>& v, const std::string& path) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) throw ConfigError("config: " + path + " entries must be positive");
        if (i > 0 && !(v[i] > v[i - 1]))
            throw ConfigError("config: " + path + " must be strictly increasing");
    }
}

}  // namespace

Kernel parse_kernel_spec(const std::string& spec) {
    std::vector<std::string> tok;
    std::string cur;
    std::istringstream in(spec);
    while (std::getline(in, cur, ':')) tok.push_back(cur);
    if (tok.empty()) throw ConfigError("empty kernel spec");
    const std::string& fam = tok[0];
    auto arity = [&](std::size_t n) {
        if (tok.size() != n)
            throw ConfigError("kernel spec '" + spec + "': expected " + std::to_string(n - 1) +
                              " parameter(s) for " + fam);
    };
    if (fam == "gaussian") {
        arity(2);
        return Kernel::gaussian(parse_num_token(tok[1], "kernel spec"));
    }
    if (fam == "laplace") {
        arity(2);
        return Kernel::laplace(parse_num_token(tok[1], "kernel spec"));
    }
    if (fam == "bump") {
        arity(2);
        return Kernel::bump(parse_num_token(tok[1], "kernel spec"));
    }
    if (fam == "power3") {
        arity(1);
        return Kernel::power_cubic();
    }
    if (fam == "power2") {
        arity(1);
        return Kernel::power_quadratic();
    }
    if (fam == "cutoff") {
        if (tok.size() < 3)
            throw ConfigError("kernel spec '" + spec + "': cutoff needs cutoff:RADIUS:<base>");
        const double radius = parse_num_token(tok[1], "kernel spec");
        std::string base = tok[2];
        for (std::size_t i = 3; i < tok.size(); ++i) base += ":" + tok[i];
        return Kernel::cutoff(parse_kernel_spec(base), radius);
    }
    throw ConfigError("unknown kernel family '" + fam + "' in spec '" + spec + "'");
}

Reaction parse_reaction_spec(const std::string& spec) {
    if (spec == "logistic") return Reaction::logistic();
    const auto colon = spec.find(':');
    const std::string fam = spec.substr(0, colon);
    if (fam == "logistic_upper" || fam == "logistic_lower") {
        if (colon == std::string::npos)
            throw ConfigError("reaction spec '" + spec + "' needs :EPS");
        const double eps = parse_num_token(spec.substr(colon + 1), "reaction spec");
        return fam == "logistic_upper" ? Reaction::logistic_upper(eps)
                                       : Reaction::logistic_lower(eps);
    }
    throw ConfigError("unknown reaction spec '" + spec + "'");
}

LabConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    require_object(j, "(root)");
    check_keys(j,
               {"experiment", "output_dir", "emit_timing", "solver", "profile", "eigen",
                "semiwave", "dichotomy_scan", "acceleration_check", "vanishing_bound"},
               "(root)");

    LabConfig cfg;
    if (j.contains("experiment"))
        cfg.experiment = experiment_from_string(as_string(j["experiment"], "experiment"));
    if (j.contains("output_dir")) cfg.output_dir = as_string(j["output_dir"], "output_dir");
    if (j.contains("emit_timing")) cfg.emit_timing = as_bool(j["emit_timing"], "emit_timing");

    if (j.contains("solver")) {
        const json& s = j["solver"];
        require_object(s, "solver");
        check_keys(s,
                   {"d", "nu", "mu", "h0", "kernel", "reaction", "eps", "n", "cfl", "t_end",
                    "snapshot_every"},
                   "solver");
        if (s.contains("d")) cfg.solver.d = as_number(s["d"], "solver.d");
        if (s.contains("nu")) cfg.solver.nu = as_number(s["nu"], "solver.nu");
        if (s.contains("mu")) cfg.solver.mu = as_number(s["mu"], "solver.mu");
        if (s.contains("h0")) cfg.solver.h0 = as_number(s["h0"], "solver.h0");
        if (s.contains("kernel")) cfg.solver.kernel = kernel_from_json(s["kernel"], "solver.kernel");
        if (s.contains("eps") && !s.contains("reaction"))
            throw ConfigError("config: solver.eps needs solver.reaction");
        if (s.contains("reaction")) cfg.solver.reaction = reaction_from_solver(s);
        if (s.contains("n")) cfg.solver.n = as_int(s["n"], "solver.n");
        if (s.contains("cfl")) cfg.solver.cfl = as_number(s["cfl"], "solver.cfl");
        if (s.contains("t_end")) cfg.solver.t_end = as_number(s["t_end"], "solver.t_end");
        if (s.contains("snapshot_every"))
            cfg.solver.snapshot_every = as_int(s["snapshot_every"], "solver.snapshot_every");
    }
    if (j.contains("profile")) cfg.profile = profile_from_json(j["profile"], "profile");

    if (j.contains("eigen")) {
        const json& e = j["eigen"];
        require_object(e, "eigen");
        check_keys(e, {"a0", "h", "nodes"}, "eigen");
        if (e.contains("a0")) cfg.eigen.a0 = as_number(e["a0"], "eigen.a0");
        if (e.contains("h")) cfg.eigen.h = as_number(e["h"], "eigen.h");
        if (e.contains("nodes")) cfg.eigen.nodes = as_int(e["nodes"], "eigen.nodes");
        if (!(cfg.eigen.h > 0.0)) throw ConfigError("config: eigen.h must be positive");
    }
    if (j.contains("semiwave")) {
        const json& w = j["semiwave"];
        require_object(w, "semiwave");
        check_keys(w, {"mode", "L", "nodes"}, "semiwave");
        if (w.contains("mode"))
            cfg.semiwave.mode = mode_from_string(as_string(w["mode"], "semiwave.mode"),
                                                 "semiwave.mode");
        if (w.contains("L")) cfg.semiwave.L = as_number(w["L"], "semiwave.L");
        if (w.contains("nodes")) cfg.semiwave.nodes = as_int(w["nodes"], "semiwave.nodes");
        if (!(cfg.semiwave.L > 0.0)) throw ConfigError("config: semiwave.L must be positive");
    }
    if (j.contains("dichotomy_scan")) {
        const json& d = j["dichotomy_scan"];
        require_object(d, "dichotomy_scan");
        check_keys(d, {"mu_lo", "mu_hi", "tol_rel"}, "dichotomy_scan");
        if (!d.contains("mu_lo") || !d.contains("mu_hi"))
            throw ConfigError("config: dichotomy_scan needs mu_lo and mu_hi");
        cfg.dichotomy.mu_lo = as_number(d["mu_lo"], "dichotomy_scan.mu_lo");
        cfg.dichotomy.mu_hi = as_number(d["mu_hi"], "dichotomy_scan.mu_hi");
        if (d.contains("tol_rel"))
            cfg.dichotomy.tol_rel = as_number(d["tol_rel"], "dichotomy_scan.tol_rel");
        if (!(cfg.dichotomy.mu_lo > 0.0) || !(cfg.dichotomy.mu_hi > cfg.dichotomy.mu_lo))
            throw ConfigError("config: dichotomy_scan needs 0 < mu_lo < mu_hi");
    }
    if (j.contains("acceleration_check")) {
        const json& a = j["acceleration_check"];
        require_object(a, "acceleration_check");
        check_keys(a, {"checkpoints", "cutoff_radii"}, "acceleration_check");
        if (a.contains("checkpoints"))
            cfg.accel.checkpoints =
                as_number_array(a["checkpoints"], "acceleration_check.checkpoints");
        if (a.contains("cutoff_radii"))
            cfg.accel.cutoff_radii =
                as_number_array(a["cutoff_radii"], "acceleration_check.cutoff_radii");
        require_increasing(cfg.accel.checkpoints, "acceleration_check.checkpoints");
        require_increasing(cfg.accel.cutoff_radii, "acceleration_check.cutoff_radii");
    }
    if (j.contains("vanishing_bound")) {
        const json& v = j["vanishing_bound"];
        require_object(v, "vanishing_bound");
        check_keys(v, {"h_tilde"}, "vanishing_bound");
        if (!v.contains("h_tilde")) throw ConfigError("config: vanishing_bound needs h_tilde");
        cfg.vanishing.h_tilde = as_number(v["h_tilde"], "vanishing_bound.h_tilde");
        if (!(cfg.vanishing.h_tilde > 0.0))
            throw ConfigError("config: vanishing_bound.h_tilde must be positive");
    }

    if (cfg.experiment == ExperimentKind::DichotomyScan && !j.contains("dichotomy_scan"))
        throw ConfigError("config: experiment dichotomy_scan needs a dichotomy_scan block");
    if (cfg.experiment == ExperimentKind::VanishingBound && !j.contains("vanishing_bound"))
        throw ConfigError("config: experiment vanishing_bound needs a vanishing_bound block");

    // Parameter domains shared by every experiment.
    const SolverConfig& s = cfg.solver;
    if (!(s.d > 0.0)) throw ConfigError("config: solver.d must be positive");
    if (!(s.nu >= 0.0)) throw ConfigError("config: solver.nu must be nonnegative");
    if (!(s.mu > 0.0)) throw ConfigError("config: solver.mu must be positive");
    if (!(s.h0 > 0.0)) throw ConfigError("config: solver.h0 must be positive");
    if (s.n < 64) throw ConfigError("config: solver.n must be at least 64");
    if (!(s.cfl > 0.0 && s.cfl <= 1.0)) throw ConfigError("config: solver.cfl must lie in (0, 1]");
    if (!(s.t_end > 0.0)) throw ConfigError("config: solver.t_end must be positive");
    if (s.snapshot_every < 1)
        throw ConfigError("config: solver.snapshot_every must be at least 1");

    // Standing assumption nu < c_tilde: violation is legal input, so record a
    // warning and proceed.
    const Moment ct = min_wave_speed(s.kernel, s.d, s.reaction.f_prime_zero());
    if (ct.finite && s.nu >= ct.value) {
        std::ostringstream w;
        w << "advection nu = " << s.nu << " is not below the minimal wave speed c_tilde = "
          << ct.value << "; front-speed guarantees no longer apply";
        cfg.warnings.push_back(w.str());
    }
    return cfg;
}

LabConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace nlfb
