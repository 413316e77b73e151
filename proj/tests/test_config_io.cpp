// ===== config parsing and result serialization tests =====

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nlfb/config.hpp"
#include "nlfb/errors.hpp"
#include "nlfb/io.hpp"

using namespace nlfb;

namespace {

// Runs fn, expects a ConfigError, and returns its message (empty if no throw).
template <typename Fn>
std::string config_error_message(Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<double> split_row(const std::string& line) {
    std::vector<double> vals;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
    return vals;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Trajectory sample_trajectory() {
    Trajectory tr;
    tr.t = {0.0, 0.5, 1.0};
    tr.g = {-1.0, -1.25, -1.5};
    tr.h = {1.0, 1.25, 1.5};
    tr.h_rate = {0.5, 0.5, 0.4999999999999999};
    tr.g_rate = {-0.5, -0.5, -0.5};
    tr.max_w = {1.0, 0.9, 0.8125};
    tr.mass = {1.2, 1.1, 1.0000000000000002};
    Snapshot s0;
    s0.t = 0.0;
    s0.x = Eigen::ArrayXd::LinSpaced(3, -1.0, 1.0);
    s0.u = Eigen::ArrayXd::Constant(3, 0.25);
    Snapshot s1;
    s1.t = 1.0;
    s1.x = Eigen::ArrayXd::LinSpaced(3, -1.5, 1.5);
    s1.u = Eigen::ArrayXd::Constant(3, 0.125);
    tr.snapshots = {s0, s1};
    tr.final_w = s1.u;
    return tr;
}

}  // namespace

// ===== config defaults and overrides =====

TEST_CASE("empty config yields the documented defaults") {
    const LabConfig cfg = parse_config_text("{}");
    CHECK(cfg.experiment == ExperimentKind::Simulate);
    CHECK(cfg.output_dir == "out");
    CHECK(cfg.emit_timing == false);
    CHECK(cfg.solver.d == 1.0);
    CHECK(cfg.solver.nu == 0.0);
    CHECK(cfg.solver.mu == 1.0);
    CHECK(cfg.solver.h0 == 1.0);
    CHECK(cfg.solver.n == 400);
    CHECK(cfg.solver.cfl == 0.5);
    CHECK(cfg.solver.t_end == 10.0);
    CHECK(cfg.solver.snapshot_every == 100);
    CHECK(cfg.solver.kernel.family() == KernelFamily::Gaussian);
    CHECK(cfg.solver.kernel.param() == 1.0);
    CHECK(cfg.solver.reaction.family() == ReactionFamily::Logistic);
    CHECK(cfg.profile.is_parabolic());
    CHECK(cfg.profile.amplitude() == 1.0);
    CHECK(cfg.eigen.a0 == 1.0);
    CHECK(cfg.eigen.h == 1.0);
    CHECK(cfg.eigen.nodes == 0);
    CHECK(cfg.semiwave.mode == DriftMode::Neutral);
    CHECK(cfg.semiwave.L == 40.0);
    CHECK(cfg.semiwave.nodes == 0);
    CHECK(cfg.warnings.empty());
}

TEST_CASE("solver block overrides every field") {
    const char* text = R"({
        "experiment": "speeds",
        "output_dir": "runs/a",
        "emit_timing": true,
        "solver": {
            "d": 2.0, "nu": 0.1, "mu": 3.5, "h0": 2.5,
            "n": 128, "cfl": 0.25, "t_end": 42.0, "snapshot_every": 7,
            "kernel": "laplace:1.5",
            "reaction": "logistic_upper", "eps": 0.1
        }
    })";
    const LabConfig cfg = parse_config_text(text);
    CHECK(cfg.experiment == ExperimentKind::Speeds);
    CHECK(cfg.output_dir == "runs/a");
    CHECK(cfg.emit_timing == true);
    CHECK(cfg.solver.d == 2.0);
    CHECK(cfg.solver.nu == 0.1);
    CHECK(cfg.solver.mu == 3.5);
    CHECK(cfg.solver.h0 == 2.5);
    CHECK(cfg.solver.n == 128);
    CHECK(cfg.solver.cfl == 0.25);
    CHECK(cfg.solver.t_end == 42.0);
    CHECK(cfg.solver.snapshot_every == 7);
    CHECK(cfg.solver.kernel.family() == KernelFamily::Laplace);
    CHECK(cfg.solver.kernel.param() == 1.5);
    CHECK(cfg.solver.reaction.family() == ReactionFamily::LogisticUpper);
    CHECK(cfg.solver.reaction.eps() == 0.1);
    CHECK(cfg.warnings.empty());
}

TEST_CASE("kernel accepts compact strings and typed objects") {
    auto kernel_of = [](const std::string& body) {
        return parse_config_text("{\"solver\": {\"kernel\": " + body + "}}").solver.kernel;
    };

    Kernel k1 = kernel_of("\"bump:2.5\"");
    CHECK(k1.family() == KernelFamily::SmoothBump);
    CHECK(k1.param() == 2.5);

    Kernel k2 = kernel_of(R"({"type": "gaussian", "params": {"sigma": 2.0}})");
    CHECK(k2.family() == KernelFamily::Gaussian);
    CHECK(k2.param() == 2.0);

    // omitted params default to 1
    Kernel k3 = kernel_of(R"({"type": "laplace"})");
    CHECK(k3.family() == KernelFamily::Laplace);
    CHECK(k3.param() == 1.0);

    Kernel k4 = kernel_of(R"({"type": "power3"})");
    CHECK(k4.family() == KernelFamily::PowerCubic);

    Kernel k5 = kernel_of(R"({"type": "power2", "params": {}})");
    CHECK(k5.family() == KernelFamily::PowerQuadratic);
}

TEST_CASE("cutoff kernel objects nest a base kernel") {
    const char* text = R"({
        "solver": {"kernel": {"type": "cutoff", "params": {
            "radius": 5.0,
            "base": {"type": "laplace", "params": {"beta": 2.0}}
        }}}
    })";
    const Kernel k = parse_config_text(text).solver.kernel;
    CHECK(k.family() == KernelFamily::CutOff);
    CHECK(k.param() == 5.0);
    CHECK(k.base().family() == KernelFamily::Laplace);
    CHECK(k.base().param() == 2.0);

    const Kernel compact =
        parse_config_text(R"({"solver": {"kernel": "cutoff:5:laplace:2"}})").solver.kernel;
    CHECK(compact.family() == KernelFamily::CutOff);
    CHECK(compact.param() == 5.0);
    CHECK(compact.base().param() == 2.0);
    CHECK(compact.eval(0.0) == k.eval(0.0));
}

TEST_CASE("kernel objects reject unknown types and foreign parameters") {
    auto parse_kernel_body = [](const std::string& body) {
        return [body] { parse_config_text("{\"solver\": {\"kernel\": " + body + "}}"); };
    };
    CHECK(contains(config_error_message(parse_kernel_body(R"({"type": "nope"})")),
                   "unknown kernel type"));
    CHECK(contains(
        config_error_message(parse_kernel_body(R"({"type": "gaussian", "params": {"beta": 1.0}})")),
        "solver.kernel.params.beta"));
    CHECK(contains(config_error_message(parse_kernel_body(R"({"params": {"sigma": 1.0}})")),
                   "needs a type"));
    CHECK(contains(
        config_error_message(parse_kernel_body(R"({"type": "cutoff", "params": {"radius": 5.0}})")),
        "radius and base"));
    CHECK(contains(
        config_error_message(parse_kernel_body(R"({"type": "gaussian", "extra": 1.0})")),
        "solver.kernel.extra"));
    CHECK(contains(config_error_message(parse_kernel_body("3.0")), "must be an object"));
}

TEST_CASE("reaction strings pair with a sibling eps") {
    auto reaction_of = [](const std::string& solver_body) {
        return parse_config_text("{\"solver\": " + solver_body + "}").solver.reaction;
    };

    Reaction r1 = reaction_of(R"({"reaction": "logistic"})");
    CHECK(r1.family() == ReactionFamily::Logistic);

    Reaction r2 = reaction_of(R"({"reaction": "logistic_upper", "eps": 0.1})");
    CHECK(r2.family() == ReactionFamily::LogisticUpper);
    CHECK(r2.eps() == 0.1);
    CHECK(r2.positive_zero() == 1.1);

    Reaction r3 = reaction_of(R"({"reaction": "logistic_lower", "eps": 0.2})");
    CHECK(r3.family() == ReactionFamily::LogisticLower);
    CHECK(r3.positive_zero() == 0.8);

    Reaction r4 = reaction_of(R"({"reaction": "logistic_lower:0.2"})");
    CHECK(r4.family() == ReactionFamily::LogisticLower);
    CHECK(r4.eps() == 0.2);
}

TEST_CASE("reaction eps conflicts are rejected") {
    auto parse_solver = [](const std::string& body) {
        return [body] { parse_config_text("{\"solver\": " + body + "}"); };
    };
    CHECK(contains(config_error_message(parse_solver(R"({"reaction": "logistic", "eps": 0.1})")),
                   "perturbed reaction"));
    CHECK(contains(config_error_message(parse_solver(R"({"reaction": "logistic_upper"})")),
                   "needs solver.eps"));
    CHECK(contains(config_error_message(parse_solver(R"({"eps": 0.1})")),
                   "solver.eps needs solver.reaction"));
    CHECK(contains(
        config_error_message(parse_solver(R"({"reaction": "logistic_upper:0.1", "eps": 0.1})")),
        "conflicts"));
    CHECK(contains(config_error_message(parse_solver(R"({"reaction": "nope"})")),
                   "unknown reaction"));
}

TEST_CASE("unknown keys are rejected with their full path") {
    CHECK(contains(config_error_message([] { parse_config_text(R"({"bogus": 1})"); }),
                   "(root).bogus"));
    CHECK(contains(config_error_message([] { parse_config_text(R"({"solver": {"bogus": 1}})"); }),
                   "solver.bogus"));
    CHECK(contains(config_error_message([] { parse_config_text(R"({"eigen": {"m": 128}})"); }),
                   "eigen.m"));
    CHECK(contains(config_error_message(
                       [] { parse_config_text(R"({"semiwave": {"mode": "neutral", "dx": 1.0}})"); }),
                   "semiwave.dx"));
    CHECK(contains(config_error_message(
                       [] { parse_config_text(R"({"profile": {"type": "parabolic", "values": [1.0]}})"); }),
                   "profile.values"));
}

TEST_CASE("domain violations are rejected") {
    auto rejects = [](const std::string& solver_body, const std::string& needle) {
        const std::string msg =
            config_error_message([&] { parse_config_text("{\"solver\": " + solver_body + "}"); });
        CAPTURE(solver_body);
        CHECK(contains(msg, needle));
    };
    rejects(R"({"d": 0.0})", "solver.d");
    rejects(R"({"nu": -0.1})", "solver.nu");
    rejects(R"({"mu": 0.0})", "solver.mu");
    rejects(R"({"mu": -1.0})", "solver.mu");
    rejects(R"({"h0": 0.0})", "solver.h0");
    rejects(R"({"n": 63})", "solver.n");
    rejects(R"({"cfl": 0.0})", "solver.cfl");
    rejects(R"({"cfl": 1.5})", "solver.cfl");
    rejects(R"({"t_end": 0.0})", "solver.t_end");
    rejects(R"({"snapshot_every": 0})", "solver.snapshot_every");
    // type errors carry the path too
    rejects(R"({"n": 128.5})", "solver.n must be an integer");
    rejects(R"({"d": "two"})", "solver.d must be a number");
}

TEST_CASE("experiment names parse and required blocks are enforced") {
    auto kind_of = [](const std::string& name) {
        std::string text = "{\"experiment\": \"" + name + "\"";
        if (name == "dichotomy_scan")
            text += R"(, "dichotomy_scan": {"mu_lo": 0.1, "mu_hi": 1.0})";
        if (name == "vanishing_bound") text += R"(, "vanishing_bound": {"h_tilde": 0.3})";
        text += "}";
        return parse_config_text(text).experiment;
    };
    CHECK(kind_of("simulate") == ExperimentKind::Simulate);
    CHECK(kind_of("eigen") == ExperimentKind::Eigen);
    CHECK(kind_of("critical_length") == ExperimentKind::CriticalLength);
    CHECK(kind_of("semiwave") == ExperimentKind::SemiWave);
    CHECK(kind_of("speeds") == ExperimentKind::Speeds);
    CHECK(kind_of("dichotomy_scan") == ExperimentKind::DichotomyScan);
    CHECK(kind_of("acceleration_check") == ExperimentKind::AccelerationCheck);
    CHECK(kind_of("vanishing_bound") == ExperimentKind::VanishingBound);

    CHECK(contains(
        config_error_message([] { parse_config_text(R"({"experiment": "warp_drive"})"); }),
        "unknown experiment"));
    CHECK(contains(
        config_error_message([] { parse_config_text(R"({"experiment": "dichotomy_scan"})"); }),
        "needs a dichotomy_scan block"));
    CHECK(contains(
        config_error_message([] { parse_config_text(R"({"experiment": "vanishing_bound"})"); }),
        "needs a vanishing_bound block"));
}

TEST_CASE("experiment blocks validate their own fields") {
    const LabConfig cfg = parse_config_text(R"({
        "dichotomy_scan": {"mu_lo": 0.25, "mu_hi": 8.0, "tol_rel": 0.02},
        "acceleration_check": {"checkpoints": [10.0, 30.0], "cutoff_radii": [2.0, 4.0, 8.0]},
        "vanishing_bound": {"h_tilde": 0.45},
        "eigen": {"a0": 0.5, "h": 2.0, "nodes": 256},
        "semiwave": {"mode": "right", "L": 60.0, "nodes": 1201}
    })");
    CHECK(cfg.dichotomy.mu_lo == 0.25);
    CHECK(cfg.dichotomy.mu_hi == 8.0);
    CHECK(cfg.dichotomy.tol_rel == 0.02);
    CHECK(cfg.accel.checkpoints == std::vector<double>{10.0, 30.0});
    CHECK(cfg.accel.cutoff_radii == std::vector<double>{2.0, 4.0, 8.0});
    CHECK(cfg.vanishing.h_tilde == 0.45);
    CHECK(cfg.eigen.a0 == 0.5);
    CHECK(cfg.eigen.h == 2.0);
    CHECK(cfg.eigen.nodes == 256);
    CHECK(cfg.semiwave.mode == DriftMode::Rightward);
    CHECK(cfg.semiwave.L == 60.0);
    CHECK(cfg.semiwave.nodes == 1201);

    CHECK(contains(config_error_message([] {
                       parse_config_text(R"({"dichotomy_scan": {"mu_lo": 2.0, "mu_hi": 1.0}})");
                   }),
                   "0 < mu_lo < mu_hi"));
    CHECK(contains(config_error_message(
                       [] { parse_config_text(R"({"dichotomy_scan": {"mu_lo": 0.1}})"); }),
                   "mu_lo and mu_hi"));
    CHECK(contains(config_error_message([] {
                       parse_config_text(
                           R"({"acceleration_check": {"checkpoints": [40.0, 20.0]}})");
                   }),
                   "strictly increasing"));
    CHECK(contains(config_error_message([] {
                       parse_config_text(
                           R"({"acceleration_check": {"cutoff_radii": [-1.0, 2.0]}})");
                   }),
                   "must be positive"));
    CHECK(contains(config_error_message(
                       [] { parse_config_text(R"({"vanishing_bound": {"h_tilde": 0.0}})"); }),
                   "h_tilde"));
    CHECK(contains(
        config_error_message([] { parse_config_text(R"({"eigen": {"h": -1.0}})"); }),
        "eigen.h"));
    CHECK(contains(config_error_message(
                       [] { parse_config_text(R"({"semiwave": {"mode": "sideways"}})"); }),
                   "drift mode"));
}

TEST_CASE("profile block parses parabolic and custom forms") {
    const LabConfig a = parse_config_text(R"({"profile": {"type": "parabolic", "amplitude": 0.5}})");
    CHECK(a.profile.is_parabolic());
    CHECK(a.profile.amplitude() == 0.5);

    const LabConfig b =
        parse_config_text(R"({"profile": {"type": "custom", "values": [0.0, 0.5, 1.0, 0.5, 0.0]}})");
    CHECK(!b.profile.is_parabolic());
    CHECK(b.profile.values().size() == 5);
    CHECK(b.profile.values()[2] == 1.0);

    CHECK(contains(config_error_message([] { parse_config_text(R"({"profile": {}})"); }),
                   "needs a type"));
    CHECK(contains(
        config_error_message([] { parse_config_text(R"({"profile": {"type": "custom"}})"); }),
        "needs values"));
    CHECK(contains(
        config_error_message([] { parse_config_text(R"({"profile": {"type": "weird"}})"); }),
        "unknown profile type"));
}

TEST_CASE("advection at or above the minimal wave speed records a warning") {
    // gaussian(1), d = 1, logistic: minimal speed is exp(1/2), so nu = 2 violates
    // the standing assumption but must still parse.
    const LabConfig hot = parse_config_text(R"({"solver": {"nu": 2.0}})");
    REQUIRE(hot.warnings.size() == 1);
    CHECK(contains(hot.warnings[0], "minimal wave speed"));
    CHECK(hot.solver.nu == 2.0);

    const LabConfig cool = parse_config_text(R"({"solver": {"nu": 1.0}})");
    CHECK(cool.warnings.empty());

    // heavy-tail kernel: no finite minimal speed, so no warning at any nu
    const LabConfig heavy =
        parse_config_text(R"({"solver": {"nu": 50.0, "kernel": "power2"}})");
    CHECK(heavy.warnings.empty());
}

TEST_CASE("config files load from disk and missing paths fail cleanly") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "nlfb_cfg_roundtrip.json";
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << R"({"solver": {"d": 2.0, "kernel": "laplace:1.5"}})";
    }
    const LabConfig cfg = parse_config(path.string());
    CHECK(cfg.solver.d == 2.0);
    CHECK(cfg.solver.kernel.family() == KernelFamily::Laplace);
    fs::remove(path);

    CHECK(contains(config_error_message([] { parse_config("/nonexistent/nope.json"); }),
                   "cannot open"));
    CHECK(contains(config_error_message([] { parse_config_text("not json"); }),
                   "JSON parse error"));
    CHECK(contains(config_error_message([] { parse_config_text("[1, 2]"); }),
                   "must be an object"));
}

// ===== compact spec strings =====

TEST_CASE("compact kernel specs parse and reject malformed input") {
    CHECK(parse_kernel_spec("gaussian:1").family() == KernelFamily::Gaussian);
    CHECK(parse_kernel_spec("laplace:0.5").param() == 0.5);
    CHECK(parse_kernel_spec("bump:3").family() == KernelFamily::SmoothBump);
    CHECK(parse_kernel_spec("power3").family() == KernelFamily::PowerCubic);
    CHECK(parse_kernel_spec("power2").family() == KernelFamily::PowerQuadratic);

    CHECK_THROWS_AS(parse_kernel_spec(""), ConfigError);
    CHECK_THROWS_AS(parse_kernel_spec("gaussian"), ConfigError);
    CHECK_THROWS_AS(parse_kernel_spec("power3:1"), ConfigError);
    CHECK_THROWS_AS(parse_kernel_spec("nope:1"), ConfigError);
    CHECK_THROWS_AS(parse_kernel_spec("cutoff:5"), ConfigError);
    CHECK_THROWS_AS(parse_kernel_spec("gaussian:abc"), ConfigError);
    CHECK_THROWS_AS(parse_kernel_spec("laplace:1.5x"), ConfigError);
}

TEST_CASE("compact reaction specs parse and reject malformed input") {
    CHECK(parse_reaction_spec("logistic").family() == ReactionFamily::Logistic);
    CHECK(parse_reaction_spec("logistic_upper:0.25").eps() == 0.25);
    CHECK(parse_reaction_spec("logistic_lower:0.25").family() == ReactionFamily::LogisticLower);

    CHECK_THROWS_AS(parse_reaction_spec("logistic_upper"), ConfigError);
    CHECK_THROWS_AS(parse_reaction_spec("logistic_lower:1.0"), ConfigError);
    CHECK_THROWS_AS(parse_reaction_spec("mystery"), ConfigError);
    CHECK_THROWS_AS(parse_reaction_spec("logistic_upper:zz"), ConfigError);
}

// ===== serialization =====

TEST_CASE("outcome labels round trip") {
    CHECK(outcome_label(Outcome::Vanishing) == "vanishing");
    CHECK(outcome_label(Outcome::Spreading) == "spreading");
    CHECK(outcome_label(Outcome::Undecided) == "undecided");
    CHECK(outcome_from_label("vanishing") == Outcome::Vanishing);
    CHECK(outcome_from_label("spreading") == Outcome::Spreading);
    CHECK(outcome_from_label("undecided") == Outcome::Undecided);
    CHECK_THROWS_AS(outcome_from_label("weird"), ConfigError);
}

TEST_CASE("timeseries csv has a fixed header and one row per sample") {
    CHECK(timeseries_csv(Trajectory{}) == "t,g,h,h_rate,g_rate,max_u,mass\n");

    const Trajectory tr = sample_trajectory();
    const std::string csv = timeseries_csv(tr);
    const std::vector<std::string> lines = split_lines(csv);
    REQUIRE(lines.size() == 1 + tr.t.size());
    CHECK(lines[0] == "t,g,h,h_rate,g_rate,max_u,mass");
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        const std::vector<double> row = split_row(lines[1 + i]);
        REQUIRE(row.size() == 7);
        // 17 significant digits round trip doubles exactly
        CHECK(row[0] == tr.t[i]);
        CHECK(row[1] == tr.g[i]);
        CHECK(row[2] == tr.h[i]);
        CHECK(row[3] == tr.h_rate[i]);
        CHECK(row[4] == tr.g_rate[i]);
        CHECK(row[5] == tr.max_w[i]);
        CHECK(row[6] == tr.mass[i]);
    }
}

TEST_CASE("snapshots csv flattens every snapshot") {
    CHECK(snapshots_csv(Trajectory{}) == "t,x,u\n");

    const Trajectory tr = sample_trajectory();
    const std::string csv = snapshots_csv(tr);
    const std::vector<std::string> lines = split_lines(csv);
    REQUIRE(lines.size() == 1 + 6);
    CHECK(lines[0] == "t,x,u");
    const std::vector<double> first = split_row(lines[1]);
    REQUIRE(first.size() == 3);
    CHECK(first[0] == 0.0);
    CHECK(first[1] == -1.0);
    CHECK(first[2] == 0.25);
    const std::vector<double> last = split_row(lines[6]);
    CHECK(last[0] == 1.0);
    CHECK(last[1] == 1.5);
    CHECK(last[2] == 0.125);
}

TEST_CASE("summary json round trips every field at full precision") {
    RunSummary s;
    s.outcome = Outcome::Spreading;
    s.h_slope = 0.20539304474616641;
    s.g_slope = -0.15099937192232435;
    s.lambda_p = 0.369168064812776;
    s.h_star = 0.7862258911132812;
    s.mu_star_bracket = std::make_pair(0.9372705078124999, 0.9665527343749998);
    s.c_l = 0.15099937192232435;
    s.c_star = 0.2053930447461664;
    s.c_r = 0.26623861906605406;
    s.c_tilde = Moment::of(std::exp(0.5));
    s.wall_time = 1.25;

    const std::string text = summary_json(s);
    CHECK(contains(text, "\"outcome\": \"spreading\""));
    const RunSummary back = parse_summary_json(text);
    REQUIRE(back.outcome.has_value());
    CHECK(*back.outcome == Outcome::Spreading);
    CHECK(*back.h_slope == *s.h_slope);
    CHECK(*back.g_slope == *s.g_slope);
    CHECK(*back.lambda_p == *s.lambda_p);
    CHECK(*back.h_star == *s.h_star);
    REQUIRE(back.mu_star_bracket.has_value());
    CHECK(back.mu_star_bracket->first == s.mu_star_bracket->first);
    CHECK(back.mu_star_bracket->second == s.mu_star_bracket->second);
    CHECK(*back.c_l == *s.c_l);
    CHECK(*back.c_star == *s.c_star);
    CHECK(*back.c_r == *s.c_r);
    REQUIRE(back.c_tilde.has_value());
    CHECK(back.c_tilde->finite);
    CHECK(back.c_tilde->value == s.c_tilde->value);
    CHECK(*back.wall_time == 1.25);
}

TEST_CASE("absent summary fields stay absent and infinite speeds map to null") {
    const std::string empty = summary_json(RunSummary{});
    CHECK(empty == "{}\n");
    const RunSummary none = parse_summary_json(empty);
    CHECK(!none.outcome.has_value());
    CHECK(!none.h_slope.has_value());
    CHECK(!none.c_tilde.has_value());
    CHECK(!none.wall_time.has_value());

    RunSummary s;
    s.c_tilde = Moment::infinite();
    const std::string text = summary_json(s);
    CHECK(contains(text, "\"c_tilde\": null"));
    const RunSummary back = parse_summary_json(text);
    REQUIRE(back.c_tilde.has_value());
    CHECK(!back.c_tilde->finite);

    CHECK_THROWS_AS(parse_summary_json("not json"), ConfigError);
    CHECK_THROWS_AS(parse_summary_json(R"({"mu_star_bracket": 1.0})"), ConfigError);
    CHECK_THROWS_AS(parse_summary_json(R"({"mu_star_bracket": [1.0]})"), ConfigError);
}

TEST_CASE("write_outputs creates the directory and rewrites byte-identically") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "nlfb_io_test_full";
    fs::remove_all(dir);

    RunSummary s;
    s.outcome = Outcome::Undecided;
    s.h_slope = 0.5;
    const Trajectory tr = sample_trajectory();

    write_outputs(s, &tr, dir.string());
    REQUIRE(fs::exists(dir / "summary.json"));
    REQUIRE(fs::exists(dir / "timeseries.csv"));
    REQUIRE(fs::exists(dir / "snapshots.csv"));
    const std::string sum1 = read_file(dir / "summary.json");
    const std::string ts1 = read_file(dir / "timeseries.csv");
    const std::string sn1 = read_file(dir / "snapshots.csv");
    CHECK(sum1 == summary_json(s));
    CHECK(ts1 == timeseries_csv(tr));
    CHECK(sn1 == snapshots_csv(tr));

    write_outputs(s, &tr, dir.string());
    CHECK(read_file(dir / "summary.json") == sum1);
    CHECK(read_file(dir / "timeseries.csv") == ts1);
    CHECK(read_file(dir / "snapshots.csv") == sn1);

    // summary-only runs write no csv files
    const fs::path dir2 = fs::temp_directory_path() / "nlfb_io_test_summary";
    fs::remove_all(dir2);
    write_outputs(s, nullptr, dir2.string());
    CHECK(fs::exists(dir2 / "summary.json"));
    CHECK(!fs::exists(dir2 / "timeseries.csv"));
    CHECK(!fs::exists(dir2 / "snapshots.csv"));

    fs::remove_all(dir);
    fs::remove_all(dir2);
}
