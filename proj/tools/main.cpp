// ===== nlfb command line front end =====

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlfb/config.hpp"
#include "nlfb/eigenvalue.hpp"
#include "nlfb/errors.hpp"
#include "nlfb/io.hpp"
#include "nlfb/lab.hpp"
#include "nlfb/semiwave.hpp"

namespace {

using nlohmann::ordered_json;

struct Shared {
    std::string config_path;
    std::string out_dir;
    bool quiet = false;

    nlfb::LabConfig load() const {
        nlfb::LabConfig cfg =
            config_path.empty() ? nlfb::LabConfig{} : nlfb::parse_config(config_path);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (!quiet)
            for (const std::string& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
        return cfg;
    }

    void emit(const ordered_json& j) const {
        if (!quiet) std::cout << j.dump(2) << "\n";
    }
};

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const char* mode_label(nlfb::DriftMode mode) {
    switch (mode) {
        case nlfb::DriftMode::Rightward: return "right";
        case nlfb::DriftMode::Leftward: return "left";
        default: return "neutral";
    }
}

ordered_json moment_json(const nlfb::Moment& m) {
    if (!m.finite) return nullptr;
    return m.value;
}

void run_simulate(const Shared& sh, nlfb::LabConfig cfg) {
    const Stopwatch clock;
    const nlfb::Trajectory traj = nlfb::simulate(cfg.solver, cfg.profile);
    const nlfb::Outcome outcome = nlfb::classify_outcome(traj, cfg.solver);
    nlfb::RunSummary summary;
    summary.outcome = outcome;
    if (traj.t.size() >= 20) {
        const nlfb::SlopePair slopes = nlfb::measure_speeds(traj, 0.5);
        summary.h_slope = slopes.h_slope;
        summary.g_slope = slopes.g_slope;
    }
    if (cfg.emit_timing) summary.wall_time = clock.seconds();
    nlfb::write_outputs(summary, &traj, cfg.output_dir);
    ordered_json j;
    j["outcome"] = nlfb::outcome_label(outcome);
    if (summary.h_slope) j["h_slope"] = *summary.h_slope;
    if (summary.g_slope) j["g_slope"] = *summary.g_slope;
    j["samples"] = traj.t.size();
    j["clamp_count"] = traj.clamp_count;
    sh.emit(j);
}

void run_eigen(const Shared& sh, nlfb::LabConfig cfg) {
    const Stopwatch clock;
    nlfb::EigenProblem p;
    p.d = cfg.solver.d;
    p.a0 = cfg.eigen.a0;
    p.nu = cfg.solver.nu;
    p.h = cfg.eigen.h;
    p.kernel = cfg.solver.kernel;
    p.m = cfg.eigen.nodes;
    const nlfb::EigenResult r = nlfb::principal_eigenvalue(p);
    nlfb::RunSummary summary;
    summary.lambda_p = r.lambda_p;
    if (cfg.emit_timing) summary.wall_time = clock.seconds();
    nlfb::write_outputs(summary, nullptr, cfg.output_dir);
    ordered_json j;
    j["lambda_p"] = r.lambda_p;
    j["residual"] = r.residual;
    j["iterations"] = r.iterations;
    sh.emit(j);
}

void run_critical_length(const Shared& sh, nlfb::LabConfig cfg, double f0) {
    const Stopwatch clock;
    const nlfb::CriticalLength c =
        nlfb::critical_length(cfg.solver.d, f0, cfg.solver.nu, cfg.solver.kernel);
    nlfb::RunSummary summary;
    summary.h_star = c.h_star;
    if (cfg.emit_timing) summary.wall_time = clock.seconds();
    nlfb::write_outputs(summary, nullptr, cfg.output_dir);
    ordered_json j;
    j["h_star"] = c.h_star;
    j["lambda_at_h_star"] = c.lambda_at_h_star;
    sh.emit(j);
}

void run_semiwave(const Shared& sh, nlfb::LabConfig cfg) {
    const Stopwatch clock;
    nlfb::SemiWaveProblem p;
    p.d = cfg.solver.d;
    p.nu = cfg.solver.nu;
    p.mu = cfg.solver.mu;
    p.kernel = cfg.solver.kernel;
    p.reaction = cfg.solver.reaction;
    p.mode = cfg.semiwave.mode;
    p.L = cfg.semiwave.L;
    p.m = cfg.semiwave.nodes;
    const nlfb::SpeedSelection sel = nlfb::select_speed(p);
    nlfb::RunSummary summary;
    summary.c_star = sel.c;
    if (cfg.emit_timing) summary.wall_time = clock.seconds();
    nlfb::write_outputs(summary, nullptr, cfg.output_dir);
    ordered_json j;
    j["c"] = sel.c;
    j["mode"] = mode_label(p.mode);
    j["theta_residual"] = sel.theta_residual;
    j["flux"] = sel.profile.flux;
    j["profile_residual"] = sel.profile.residual;
    j["L"] = p.L;
    j["nodes"] = sel.profile.x.size();
    j["evaluations"] = sel.evaluations;
    sh.emit(j);
}

void run_speeds(const Shared& sh, nlfb::LabConfig cfg) {
    const Stopwatch clock;
    const nlfb::SpeedTriple t = nlfb::speed_triple(cfg.solver.d, cfg.solver.nu, cfg.solver.mu,
                                                   cfg.solver.kernel, cfg.solver.reaction);
    nlfb::RunSummary summary;
    summary.c_l = t.c_l_star;
    summary.c_star = t.c_star;
    summary.c_r = t.c_r_star;
    summary.c_tilde = t.c_tilde;
    if (cfg.emit_timing) summary.wall_time = clock.seconds();
    nlfb::write_outputs(summary, nullptr, cfg.output_dir);
    ordered_json j;
    j["c_l_star"] = t.c_l_star;
    j["c_star"] = t.c_star;
    j["c_r_star"] = t.c_r_star;
    j["c_tilde"] = moment_json(t.c_tilde);
    j["c_tilde_method"] = "linear_determinacy";
    j["evaluations"] = t.evaluations;
    j["worst_theta_residual"] = t.worst_theta_residual;
    sh.emit(j);
}

void run_dichotomy(const Shared& sh, nlfb::LabConfig cfg) {
    if (!(cfg.dichotomy.mu_hi > 0.0))
        throw nlfb::ConfigError("dichotomy-scan: set mu_lo/mu_hi via --config or flags");
    const Stopwatch clock;
    const nlfb::MuBracket b = nlfb::dichotomy_scan(cfg.solver, cfg.profile, cfg.dichotomy.mu_lo,
                                                   cfg.dichotomy.mu_hi, cfg.dichotomy.tol_rel);
    nlfb::RunSummary summary;
    summary.mu_star_bracket = std::make_pair(b.mu_lo, b.mu_hi);
    if (cfg.emit_timing) summary.wall_time = clock.seconds();
    nlfb::write_outputs(summary, nullptr, cfg.output_dir);
    ordered_json j;
    j["mu_lo"] = b.mu_lo;
    j["mu_hi"] = b.mu_hi;
    ordered_json hist = ordered_json::array();
    for (const nlfb::ScanPoint& pt : b.history) {
        ordered_json h;
        h["mu"] = pt.mu;
        h["outcome"] = nlfb::outcome_label(pt.outcome);
        h["t_end"] = pt.t_end;
        hist.push_back(h);
    }
    j["history"] = hist;
    sh.emit(j);
}

void run_accel(const Shared& sh, nlfb::LabConfig cfg) {
    const Stopwatch clock;
    const nlfb::AccelerationReport r = nlfb::acceleration_check(
        cfg.solver, cfg.profile, cfg.accel.checkpoints, cfg.accel.cutoff_radii);
    nlfb::RunSummary summary;
    if (cfg.emit_timing) summary.wall_time = clock.seconds();
    nlfb::write_outputs(summary, nullptr, cfg.output_dir);
    ordered_json j;
    j["checkpoints"] = r.checkpoints;
    j["ratios"] = r.ratios;
    j["accelerating"] = r.accelerating;
    j["cutoff_radii"] = r.cutoff_radii;
    j["cutoff_slopes"] = r.cutoff_slopes;
    j["cutoff_increasing"] = r.cutoff_increasing;
    sh.emit(j);
}

void run_vanishing(const Shared& sh, nlfb::LabConfig cfg) {
    if (!(cfg.vanishing.h_tilde > 0.0))
        throw nlfb::ConfigError("vanishing-bound: set h_tilde via --config or --h-tilde");
    const Stopwatch clock;
    const nlfb::VanishingBound b =
        nlfb::vanishing_mu_bound(cfg.solver, cfg.profile, cfg.vanishing.h_tilde);
    nlfb::RunSummary summary;
    summary.lambda_p = b.lambda;
    summary.h_star = b.h_star;
    if (cfg.emit_timing) summary.wall_time = clock.seconds();
    nlfb::write_outputs(summary, nullptr, cfg.output_dir);
    ordered_json j;
    j["mu_tilde_star"] = b.mu_tilde_star;
    j["lambda"] = b.lambda;
    j["gamma"] = b.gamma;
    j["h_tilde"] = b.h_tilde;
    j["h_star"] = b.h_star;
    j["confirmation"] = nlfb::outcome_label(b.confirmation);
    sh.emit(j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal-dispersal free-boundary laboratory"};
    app.require_subcommand(1);

    Shared sh;
    app.add_option("--config", sh.config_path, "JSON experiment configuration");
    app.add_option("--out", sh.out_dir, "output directory (overrides config)");
    app.add_flag("--quiet", sh.quiet, "suppress stdout JSON and warnings");

    // Per-flag overrides of the loaded config, applied only when given.
    std::string kernel_spec, reaction_spec, mode_str;
    double d = 0, a0 = 0, nu = 0, mu = 0, h = 0, L = 0, f0 = 1.0, h_tilde = 0;
    double mu_lo = 0, mu_hi = 0, tol_rel = 0;
    int nodes = 0;
    std::vector<double> checkpoints, radii;

    auto* sim = app.add_subcommand("simulate", "integrate the free-boundary problem");

    auto* eig = app.add_subcommand("eigen", "principal eigenvalue on a fixed interval");
    auto* eig_d = eig->add_option("--d", d, "diffusion rate");
    auto* eig_a0 = eig->add_option("--a0", a0, "zero-order coefficient");
    auto* eig_nu = eig->add_option("--nu", nu, "advection rate");
    auto* eig_h = eig->add_option("--h-len", h, "interval half-length");
    auto* eig_k = eig->add_option("--kernel", kernel_spec, "kernel spec, e.g. gaussian:1");
    auto* eig_m = eig->add_option("--nodes", nodes, "grid nodes (0 = auto)");

    auto* crit = app.add_subcommand("critical-length", "interval length where lambda_p = 0");
    auto* crit_d = crit->add_option("--d", d, "diffusion rate");
    auto* crit_f0 = crit->add_option("--f0", f0, "reaction slope at zero");
    auto* crit_nu = crit->add_option("--nu", nu, "advection rate");
    auto* crit_k = crit->add_option("--kernel", kernel_spec, "kernel spec");

    auto* sw = app.add_subcommand("semiwave", "selected front speed for one drift mode");
    auto* sw_mode = sw->add_option("--mode", mode_str, "right | neutral | left");
    auto* sw_d = sw->add_option("--d", d, "diffusion rate");
    auto* sw_nu = sw->add_option("--nu", nu, "advection rate");
    auto* sw_mu = sw->add_option("--mu", mu, "front expansion coefficient");
    auto* sw_k = sw->add_option("--kernel", kernel_spec, "kernel spec");
    auto* sw_re = sw->add_option("--reaction", reaction_spec,
                                 "logistic | logistic_upper:EPS | logistic_lower:EPS");
    auto* sw_L = sw->add_option("--L", L, "truncation length");
    auto* sw_m = sw->add_option("--nodes", nodes, "grid nodes (0 = auto, odd)");

    auto* sp = app.add_subcommand("speeds", "leftward/neutral/rightward front speeds");
    auto* sp_d = sp->add_option("--d", d, "diffusion rate");
    auto* sp_nu = sp->add_option("--nu", nu, "advection rate");
    auto* sp_mu = sp->add_option("--mu", mu, "front expansion coefficient");
    auto* sp_k = sp->add_option("--kernel", kernel_spec, "kernel spec");
    auto* sp_re = sp->add_option("--reaction", reaction_spec, "reaction spec");

    auto* scan = app.add_subcommand("dichotomy-scan", "bracket the spreading threshold mu*");
    auto* scan_lo = scan->add_option("--mu-lo", mu_lo, "vanishing endpoint");
    auto* scan_hi = scan->add_option("--mu-hi", mu_hi, "spreading endpoint");
    auto* scan_tol = scan->add_option("--tol-rel", tol_rel, "relative bracket width");

    auto* acc = app.add_subcommand("accel-check", "front acceleration for heavy-tailed kernels");
    auto* acc_cp = acc->add_option("--checkpoints", checkpoints, "times t_i for h(t_i)/t_i")
                       ->delimiter(',');
    auto* acc_rad = acc->add_option("--cutoff-radii", radii, "truncation radii for control runs")
                        ->delimiter(',');

    auto* van = app.add_subcommand("vanishing-bound", "explicit sufficient mu for vanishing");
    auto* van_ht = van->add_option("--h-tilde", h_tilde, "comparison interval half-length");

    // Let --config/--out/--quiet appear after the subcommand name too.
    for (CLI::App* s : app.get_subcommands([](const CLI::App*) { return true; }))
        s->fallthrough();

    try {
        app.parse(argc, argv);

        nlfb::LabConfig cfg = sh.load();
        if (eig_d->count() || crit_d->count() || sw_d->count() || sp_d->count())
            cfg.solver.d = d;
        if (eig_nu->count() || crit_nu->count() || sw_nu->count() || sp_nu->count())
            cfg.solver.nu = nu;
        if (sw_mu->count() || sp_mu->count()) cfg.solver.mu = mu;
        if (eig_k->count() || crit_k->count() || sw_k->count() || sp_k->count())
            cfg.solver.kernel = nlfb::parse_kernel_spec(kernel_spec);
        if (sw_re->count() || sp_re->count())
            cfg.solver.reaction = nlfb::parse_reaction_spec(reaction_spec);
        if (eig_a0->count()) cfg.eigen.a0 = a0;
        if (eig_h->count()) cfg.eigen.h = h;
        if (eig_m->count()) cfg.eigen.nodes = nodes;
        if (sw_mode->count()) {
            if (mode_str == "right")
                cfg.semiwave.mode = nlfb::DriftMode::Rightward;
            else if (mode_str == "neutral")
                cfg.semiwave.mode = nlfb::DriftMode::Neutral;
            else if (mode_str == "left")
                cfg.semiwave.mode = nlfb::DriftMode::Leftward;
            else
                throw nlfb::ConfigError("semiwave: --mode must be right, neutral, or left");
        }
        if (sw_L->count()) cfg.semiwave.L = L;
        if (sw_m->count()) cfg.semiwave.nodes = nodes;
        if (scan_lo->count()) cfg.dichotomy.mu_lo = mu_lo;
        if (scan_hi->count()) cfg.dichotomy.mu_hi = mu_hi;
        if (scan_tol->count()) cfg.dichotomy.tol_rel = tol_rel;
        if (acc_cp->count()) cfg.accel.checkpoints = checkpoints;
        if (acc_rad->count()) cfg.accel.cutoff_radii = radii;
        if (van_ht->count()) cfg.vanishing.h_tilde = h_tilde;

        if (sim->parsed()) run_simulate(sh, std::move(cfg));
        else if (eig->parsed()) run_eigen(sh, std::move(cfg));
        else if (crit->parsed()) run_critical_length(sh, std::move(cfg), f0);
        else if (sw->parsed()) run_semiwave(sh, std::move(cfg));
        else if (sp->parsed()) run_speeds(sh, std::move(cfg));
        else if (scan->parsed()) run_dichotomy(sh, std::move(cfg));
        else if (acc->parsed()) run_accel(sh, std::move(cfg));
        else if (van->parsed()) run_vanishing(sh, std::move(cfg));
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const nlfb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlfb::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const nlfb::InapplicableError& e) {
        std::cerr << "inapplicable: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
