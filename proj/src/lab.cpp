// ===== experiment orchestration =====

#include "nlfb/lab.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "nlfb/eigenvalue.hpp"
#include "nlfb/errors.hpp"

namespace nlfb {

namespace {

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Vanishing: return "Vanishing";
        case Outcome::Spreading: return "Spreading";
        default: return "Undecided";
    }
}

double lsq_slope(const std::vector<double>& t, const std::vector<double>& y, std::size_t begin) {
    const std::size_t n = t.size() - begin;
    double tm = 0.0, ym = 0.0;
    for (std::size_t i = begin; i < t.size(); ++i) {
        tm += t[i];
        ym += y[i];
    }
    tm /= n;
    ym /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = begin; i < t.size(); ++i) {
        num += (t[i] - tm) * (y[i] - ym);
        den += (t[i] - tm) * (t[i] - tm);
    }
    return num / den;
}

// One classified run with the Undecided horizon-doubling policy.
ScanPoint classify_at(SolverConfig cfg, const InitialProfile& profile, double mu,
                      double ref_length) {
    cfg.mu = mu;
    Outcome out = Outcome::Undecided;
    for (int attempt = 0; attempt <= 2; ++attempt) {
        const Trajectory traj = simulate(cfg, profile);
        out = classify_outcome(traj, cfg, ref_length);
        if (out != Outcome::Undecided || attempt == 2) break;
        cfg.t_end *= 2.0;
    }
    return ScanPoint{mu, out, cfg.t_end};
}

}  // namespace

SlopePair measure_speeds(const Trajectory& traj, double window_fraction) {
    if (!(window_fraction > 0.0 && window_fraction < 1.0))
        throw ConfigError("measure_speeds: window_fraction must lie in (0, 1)");
    if (traj.t.empty() || !(traj.t.back() > 0.0))
        throw ConfigError("measure_speeds: trajectory final time must be positive");
    const std::size_t total = traj.t.size();
    const std::size_t count =
        static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(total)));
    if (count < 10) throw ConfigError("measure_speeds: fewer than 10 samples in the slope window");
    const std::size_t begin = total - count;
    SlopePair out;
    out.h_slope = lsq_slope(traj.t, traj.h, begin);
    out.g_slope = -lsq_slope(traj.t, traj.g, begin);
    return out;
}

MuBracket dichotomy_scan(const SolverConfig& base, const InitialProfile& profile, double mu_lo,
                         double mu_hi, double tol_rel) {
    if (!(mu_lo > 0.0) || !(mu_hi > mu_lo))
        throw ConfigError("dichotomy_scan: need 0 < mu_lo < mu_hi");
    if (!(tol_rel > 0.0 && tol_rel < 1.0))
        throw ConfigError("dichotomy_scan: tol_rel must lie in (0, 1)");

    // Throws "spreading always occurs" when f'(0) >= d, i.e. no finite
    // critical length exists; the same dichotomy-free regime holds when the
    // initial interval already exceeds it.
    const double f0 = base.reaction.f_prime_zero();
    const CriticalLength crit = critical_length(base.d, f0, base.nu, base.kernel, 1e-4);
    if (!(base.h0 < crit.h_star))
        throw InapplicableError(
            "dichotomy_scan: spreading always occurs, initial half-length h0 = " +
            std::to_string(base.h0) + " is at or above the critical length " +
            std::to_string(crit.h_star));

    // Endpoint classifications are independent jobs; join in parameter order.
    auto lo_job = std::async(std::launch::async, classify_at, base, std::cref(profile), mu_lo,
                             crit.h_star);
    auto hi_job = std::async(std::launch::async, classify_at, base, std::cref(profile), mu_hi,
                             crit.h_star);
    MuBracket out;
    out.history.push_back(lo_job.get());
    out.history.push_back(hi_job.get());
    const ScanPoint& lo_pt = out.history[0];
    const ScanPoint& hi_pt = out.history[1];
    if (lo_pt.outcome == Outcome::Undecided || hi_pt.outcome == Outcome::Undecided)
        throw NumericError("dichotomy_scan: endpoint outcome still undecided after doubling the "
                           "horizon twice");
    if (lo_pt.outcome != Outcome::Vanishing || hi_pt.outcome != Outcome::Spreading)
        throw ConfigError(std::string("dichotomy_scan: endpoints do not straddle: mu_lo -> ") +
                          outcome_name(lo_pt.outcome) + ", mu_hi -> " +
                          outcome_name(hi_pt.outcome));

    // Near the threshold the decay rate tends to zero, so a thin band of mu
    // stays undecided at any fixed horizon. A midpoint falling inside it is
    // retried at other fractions of the bracket; the scan only fails when no
    // probe resolves.
    constexpr double kFractions[] = {0.5, 0.25, 0.75, 0.125, 0.875};
    double lo = mu_lo, hi = mu_hi;
    int spent = 0;
    while (hi - lo > tol_rel * hi) {
        if (++spent > 200) throw NumericError("dichotomy_scan: evaluation budget exhausted");
        bool resolved = false;
        for (double frac : kFractions) {
            const double mid = lo + frac * (hi - lo);
            const ScanPoint pt = classify_at(base, profile, mid, crit.h_star);
            out.history.push_back(pt);
            if (pt.outcome == Outcome::Vanishing) {
                lo = mid;
                resolved = true;
                break;
            }
            if (pt.outcome == Outcome::Spreading) {
                hi = mid;
                resolved = true;
                break;
            }
        }
        if (!resolved)
            throw NumericError("dichotomy_scan: outcomes between mu = " + std::to_string(lo) +
                               " and " + std::to_string(hi) +
                               " stay undecided after doubling the horizon twice");
    }
    out.mu_lo = lo;
    out.mu_hi = hi;
    return out;
}

double vanishing_mu_formula(double lambda, double h0, double h_tilde, double gamma) {
    if (!(lambda < 0.0)) throw ConfigError("vanishing_mu_formula: lambda must be negative");
    if (!(h0 > 0.0 && h_tilde > h0))
        throw ConfigError("vanishing_mu_formula: need 0 < h0 < h_tilde");
    if (!(gamma > 0.0)) throw ConfigError("vanishing_mu_formula: gamma must be positive");
    return lambda * (h0 - h_tilde) / (4.0 * h_tilde * gamma);
}

VanishingBound vanishing_mu_bound(const SolverConfig& cfg, const InitialProfile& profile,
                                  double h_tilde) {
    const double f0 = cfg.reaction.f_prime_zero();
    if (!(f0 < cfg.d))
        throw InapplicableError("vanishing_mu_bound: spreading always occurs when f'(0) >= d, "
                                "no vanishing bound exists");
    const CriticalLength crit = critical_length(cfg.d, f0, cfg.nu, cfg.kernel);
    if (!(cfg.h0 < h_tilde && h_tilde < crit.h_star))
        throw ConfigError("vanishing_mu_bound: h_tilde must lie strictly between h0 = " +
                          std::to_string(cfg.h0) + " and the critical length " +
                          std::to_string(crit.h_star));

    EigenProblem ep;
    ep.d = cfg.d;
    ep.a0 = f0;
    ep.nu = cfg.nu;
    ep.h = h_tilde;
    ep.kernel = cfg.kernel;
    const EigenResult er = principal_eigenvalue(ep);
    if (!(er.lambda_p < 0.0))
        throw NumericError("vanishing_mu_bound: principal eigenvalue is nonnegative below the "
                           "critical length");

    // Minimal gamma with gamma * phi >= u0 on the eigenvalue grid; u0 vanishes
    // outside [-h0, h0] subset of (-h_tilde, h_tilde), where phi > 0.
    const int m = static_cast<int>(er.phi.size());
    const double dx = 2.0 * h_tilde / (m - 1);
    double gamma = 0.0;
    for (int i = 0; i < m; ++i) {
        const double u0 = profile.eval_at(-h_tilde + i * dx, cfg.h0);
        if (u0 <= 0.0) continue;
        if (!(er.phi[i] > 0.0))
            throw NumericError("vanishing_mu_bound: eigenfunction vanishes where u0 > 0");
        gamma = std::max(gamma, u0 / er.phi[i]);
    }
    if (!(gamma > 0.0))
        throw ConfigError("vanishing_mu_bound: initial profile has no positive values");

    VanishingBound out;
    out.lambda = er.lambda_p;
    out.gamma = gamma;
    out.h_tilde = h_tilde;
    out.h_star = crit.h_star;
    out.mu_tilde_star = vanishing_mu_formula(er.lambda_p, cfg.h0, h_tilde, gamma);

    const ScanPoint pt = classify_at(cfg, profile, 0.5 * out.mu_tilde_star, crit.h_star);
    out.confirmation = pt.outcome;
    if (pt.outcome != Outcome::Vanishing)
        throw NumericError(std::string("vanishing_mu_bound: confirmation run at mu = ") +
                           std::to_string(0.5 * out.mu_tilde_star) + " classified " +
                           outcome_name(pt.outcome) + ", expected Vanishing");
    return out;
}

AccelerationReport acceleration_check(const SolverConfig& cfg, const InitialProfile& profile,
                                      const std::vector<double>& checkpoints,
                                      const std::vector<double>& cutoff_radii) {
    if (cfg.kernel.validate().holds_Jstar)
        throw InapplicableError("acceleration_check: kernel has a finite first moment, fronts "
                                "spread at finite speed");
    if (checkpoints.empty()) throw ConfigError("acceleration_check: no checkpoints given");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (!(checkpoints[i] > 0.0))
            throw ConfigError("acceleration_check: checkpoints must be positive");
        if (i > 0 && !(checkpoints[i] > checkpoints[i - 1]))
            throw ConfigError("acceleration_check: checkpoints must be strictly increasing");
    }

    SolverConfig main_cfg = cfg;
    main_cfg.t_end = checkpoints.back();

    // The truncated-kernel control runs are independent jobs.
    std::vector<std::future<Trajectory>> jobs;
    std::vector<Kernel> cut;
    if (!cutoff_radii.empty()) {
        cut = cutoff_sequence(cfg.kernel, cutoff_radii);
        for (const Kernel& k : cut) {
            SolverConfig ck = main_cfg;
            ck.kernel = k;
            jobs.push_back(std::async(std::launch::async,
                                      [ck, &profile]() { return simulate(ck, profile); }));
        }
    }

    const Trajectory traj = simulate(main_cfg, profile);
    // The check needs a persisting population; any reference length will do
    // for ruling out vanishing, so reuse h0.
    if (classify_outcome(traj, main_cfg, cfg.h0) == Outcome::Vanishing)
        throw InapplicableError("acceleration_check: population vanishes, front speed check "
                                "inapplicable");

    AccelerationReport out;
    out.checkpoints = checkpoints;
    for (double tc : checkpoints) {
        const auto it = std::lower_bound(traj.t.begin(), traj.t.end(), tc);
        std::size_t idx = static_cast<std::size_t>(it - traj.t.begin());
        if (it == traj.t.end()) {
            // The final accepted time can sit a rounding margin below t_end.
            if (!(tc - traj.t.back() <= 1e-6 * tc))
                throw NumericError("acceleration_check: trajectory ended before checkpoint");
            idx = traj.t.size() - 1;
        }
        out.ratios.push_back(traj.h[idx] / tc);
    }
    out.accelerating = true;
    for (std::size_t i = 1; i < out.ratios.size(); ++i)
        if (!(out.ratios[i] >= 1.1 * out.ratios[i - 1])) out.accelerating = false;

    out.cutoff_radii = cutoff_radii;
    for (auto& job : jobs) {
        const Trajectory tr = job.get();
        out.cutoff_slopes.push_back(measure_speeds(tr, 0.5).h_slope);
    }
    out.cutoff_increasing = !out.cutoff_slopes.empty();
    for (std::size_t i = 1; i < out.cutoff_slopes.size(); ++i)
        if (!(out.cutoff_slopes[i] > out.cutoff_slopes[i - 1])) out.cutoff_increasing = false;
    return out;
}

}  // namespace nlfb
