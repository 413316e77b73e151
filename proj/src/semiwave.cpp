// ===== semi-wave profiles and speed selection =====

#include "nlfb/semiwave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlfb/errors.hpp"

namespace nlfb {

namespace {

// Grid, quadrature weights, banded kernel row, and far-field data shared by
// every profile solve at fixed problem parameters.
struct Ws {
    int m = 0;
    double dx = 0.0;
    double L = 0.0;
    double pz = 0.0;       // far-field level, the positive zero of the reaction
    Eigen::ArrayXd x;      // nodes, x[0] = -L, x[m-1] = 0
    Eigen::ArrayXd qw;     // composite Simpson weights for the convolution
    Eigen::ArrayXd krow;   // J(k dx), k = 0..kb
    int kb = 0;            // kernel band half-width in nodes
    Eigen::ArrayXd ext;    // tail_mass(x + L): mass reaching x from the extension
    Eigen::ArrayXd tail0;  // tail_mass(-x): weight of the flux functional
    Moment corrL;          // \int_L^inf tail_mass, far-field flux correction
};

int auto_nodes(double L) {
    int m = static_cast<int>(std::ceil(L / 0.05)) + 1;
    if (m % 2 == 0) ++m;  // composite Simpson needs an odd node count
    return m;
}

Ws make_ws(const SemiWaveProblem& p) {
    if (!(p.d > 0.0)) throw ConfigError("semiwave: d must be positive");
    if (!(p.nu >= 0.0)) throw ConfigError("semiwave: nu must be nonnegative");
    if (!(p.mu > 0.0)) throw ConfigError("semiwave: mu must be positive");
    const double f0 = p.reaction.f_prime_zero();
    if (!(p.L >= 40.0 / std::sqrt(f0) - 1e-12))
        throw ConfigError("semiwave: domain too short, need L >= 40/sqrt(f'(0))");

    Ws ws;
    ws.m = p.m > 0 ? p.m : auto_nodes(p.L);
    if (ws.m % 2 == 0) throw ConfigError("semiwave: node count must be odd");
    if (ws.m < 3) throw ConfigError("semiwave: node count too small");
    ws.L = p.L;
    ws.dx = p.L / (ws.m - 1);
    if (ws.dx > 0.05 * (1.0 + 1e-12)) throw ConfigError("semiwave: node spacing must be <= 0.05");
    ws.pz = p.reaction.positive_zero();

    ws.x.resize(ws.m);
    ws.qw.resize(ws.m);
    ws.ext.resize(ws.m);
    ws.tail0.resize(ws.m);
    for (int i = 0; i < ws.m; ++i) {
        ws.x[i] = -ws.L + i * ws.dx;
        ws.qw[i] = (i == 0 || i == ws.m - 1) ? ws.dx / 3.0
                                             : (i % 2 == 1 ? 4.0 * ws.dx / 3.0 : 2.0 * ws.dx / 3.0);
        ws.ext[i] = p.kernel.tail_mass(ws.x[i] + ws.L);
        ws.tail0[i] = p.kernel.tail_mass(-ws.x[i]);
    }
    ws.x[ws.m - 1] = 0.0;

    // Kernel row, truncated where it no longer contributes at double precision.
    Eigen::ArrayXd kfull(ws.m);
    for (int k = 0; k < ws.m; ++k) kfull[k] = p.kernel.eval(k * ws.dx);
    const double peak = kfull.maxCoeff();
    int kb = ws.m - 1;
    while (kb > 1 && kfull[kb] < 1e-18 * peak) --kb;
    ws.kb = kb;
    ws.krow = kfull.head(kb + 1);

    ws.corrL = p.kernel.tail_mass_integral(ws.L);
    return ws;
}

void convolve(const Ws& ws, const Eigen::ArrayXd& wphi, Eigen::ArrayXd& out) {
    const int m = ws.m, kb = ws.kb;
    for (int i = 0; i < m; ++i) {
        const int jlo = std::max(0, i - kb);
        const int jhi = std::min(m - 1, i + kb);
        double s = 0.0;
        for (int j = jlo; j <= jhi; ++j) s += ws.krow[std::abs(i - j)] * wphi[j];
        out[i] = s;
    }
}

// Parabolic relaxation with a diagonally implicit update: with a = beta/dx,
//   phi <- [phi + dt (d (conv + ext) + a phi_right + f(phi))] / (1 + dt (d + a)).
// Every term in the numerator is nonnegative on [0, pz], so the map preserves
// positivity for any dt; dt = 2 damps the stiff local part in one step.
long relax(const Ws& ws, double d, double beta, const Reaction& re, Eigen::ArrayXd& phi) {
    const double dt = 2.0;
    const double a = beta / ws.dx;
    const double den = 1.0 + dt * (d + a);
    Eigen::ArrayXd wphi(ws.m), conv(ws.m);
    const long cap = 1000000;
    for (long it = 1; it <= cap; ++it) {
        wphi = ws.qw * phi;
        convolve(ws, wphi, conv);
        if (it % 16 == 0) {
            double res = 0.0;
            for (int i = 0; i < ws.m - 1; ++i) {
                const double r = d * (conv[i] + ws.pz * ws.ext[i] - phi[i]) +
                                 beta * (phi[i + 1] - phi[i]) / ws.dx + re.raw(phi[i]);
                res = std::max(res, std::abs(r));
            }
            if (res <= 1e-9) return it;
        }
        for (int i = 0; i < ws.m - 1; ++i) {
            const double num = phi[i] + dt * (d * (conv[i] + ws.pz * ws.ext[i]) + a * phi[i + 1] +
                                              re.raw(phi[i]));
            phi[i] = num / den;
        }
        phi[ws.m - 1] = 0.0;
        phi = phi.max(0.0);
    }
    throw NumericError("semiwave: profile relaxation did not converge within the iteration budget");
}

SemiWaveProfile run_solve(const Ws& ws, const SemiWaveProblem& p, double c, double beta,
                          const Eigen::ArrayXd* guess, long* iters_accum) {
    Eigen::ArrayXd phi;
    if (guess != nullptr) {
        if (guess->size() != ws.m) throw ConfigError("semiwave: warm start has wrong node count");
        phi = guess->max(0.0);
    } else {
        phi = ws.pz * (-ws.x / 5.0).min(1.0);
    }
    phi[ws.m - 1] = 0.0;

    const long iters = relax(ws, p.d, beta, p.reaction, phi);
    if (iters_accum != nullptr) *iters_accum += iters;

    // The fixed point can overshoot monotonicity by O(1e-9) in the first few
    // nodes above the truncation; repair once rather than projecting every
    // sweep, which would lock in a spurious boundary layer.
    double viol = 0.0;
    for (int i = 1; i < ws.m; ++i) viol = std::max(viol, phi[i] - phi[i - 1]);
    if (viol > 1e-10)
        for (int i = 1; i < ws.m; ++i) phi[i] = std::min(phi[i], phi[i - 1]);

    Eigen::ArrayXd wphi = ws.qw * phi;
    Eigen::ArrayXd conv(ws.m);
    convolve(ws, wphi, conv);
    double res = 0.0;
    for (int i = 0; i < ws.m - 1; ++i) {
        if (ws.x[i] < -ws.L + 5.0) continue;  // truncation strip excluded
        const double r = p.d * (conv[i] + ws.pz * ws.ext[i] - phi[i]) +
                         beta * (phi[i + 1] - phi[i]) / ws.dx + p.reaction.raw(phi[i]);
        res = std::max(res, std::abs(r));
    }

    SemiWaveProfile out;
    out.c = c;
    out.x = ws.x;
    out.phi = std::move(phi);
    out.far_level = ws.pz;
    out.residual = res;
    if (ws.corrL.finite) {
        double s = 0.0;
        for (int i = 0; i < ws.m; ++i) {
            const double tw = (i == 0 || i == ws.m - 1) ? 0.5 * ws.dx : ws.dx;
            s += tw * out.phi[i] * ws.tail0[i];
        }
        out.flux = s + ws.pz * ws.corrL.value;
    } else {
        out.flux = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

}  // namespace

double mode_offset(DriftMode mode, double nu) {
    switch (mode) {
        case DriftMode::Rightward: return nu;
        case DriftMode::Leftward: return -nu;
        default: return 0.0;
    }
}

Moment min_wave_speed(const Kernel& kernel, double d, double f0) {
    if (!(d > 0.0)) throw ConfigError("min_wave_speed: d must be positive");
    if (!(f0 > 0.0)) throw ConfigError("min_wave_speed: f0 must be positive");
    if (!kernel.validate().holds_Jstarstar) return Moment::infinite();

    auto speed = [&](double lam) -> double {
        const Moment em = kernel.exp_moment(lam);
        if (!em.finite) return std::numeric_limits<double>::infinity();
        return (d * (em.value - 1.0) + f0) / lam;
    };

    // Bracket the interior minimizer on a log grid; speed -> inf at both ends
    // (Jensen at 0, exponential growth or divergence at infinity).
    const int n = 400;
    double llo = std::log(1e-6), lhi = std::log(4.0);
    Eigen::ArrayXd lam(n), val(n);
    int idx = 0;
    for (int round = 0; round < 64; ++round) {
        for (int i = 0; i < n; ++i) {
            lam[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
            val[i] = speed(lam[i]);
        }
        idx = 0;
        for (int i = 1; i < n; ++i)
            if (val[i] < val[idx]) idx = i;
        if (idx == n - 1 && std::isfinite(val[idx])) {
            lhi += std::log(2.0);
            continue;
        }
        break;
    }
    if (idx == 0 || idx == n - 1)
        throw NumericError("min_wave_speed: failed to bracket the dispersion minimum");

    double a = lam[idx - 1], b = lam[idx + 1];
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = speed(x1), f2 = speed(x2);
    while (b - a > 1e-12 * (1.0 + b)) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = speed(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = speed(x2);
        }
    }
    return Moment::of(speed(0.5 * (a + b)));
}

SemiWaveProfile solve_profile(const SemiWaveProblem& p, double c) {
    return solve_profile(p, c, nullptr);
}

SemiWaveProfile solve_profile(const SemiWaveProblem& p, double c, const Eigen::ArrayXd* guess) {
    Ws ws = make_ws(p);
    const double beta = c - mode_offset(p.mode, p.nu);
    if (!(beta > 0.0))
        throw InapplicableError("semiwave: effective drift c minus mode offset must be positive");
    const Moment ct = min_wave_speed(p.kernel, p.d, p.reaction.f_prime_zero());
    if (ct.finite && !(beta < ct.value))
        throw InapplicableError(
            "semiwave: speed at or above the minimal wave speed admits no decaying profile");
    return run_solve(ws, p, c, beta, guess, nullptr);
}

double flux_functional(const SemiWaveProfile& profile, const Kernel& kernel) {
    const int m = static_cast<int>(profile.x.size());
    if (m < 3 || profile.phi.size() != m) throw ConfigError("flux_functional: malformed profile");
    const double L = -profile.x[0];
    const Moment corr = kernel.tail_mass_integral(L);
    if (!corr.finite)
        throw InapplicableError(
            "flux_functional: far-field correction diverges, kernel lacks a finite first moment");
    const double dx = profile.x[1] - profile.x[0];
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
        const double tw = (i == 0 || i == m - 1) ? 0.5 * dx : dx;
        s += tw * profile.phi[i] * kernel.tail_mass(-profile.x[i]);
    }
    return s + profile.far_level * corr.value;
}

double theta(const SemiWaveProblem& p, double c) {
    const SemiWaveProfile prof = solve_profile(p, c);
    if (!std::isfinite(prof.flux))
        throw InapplicableError("theta: flux functional diverges for this kernel");
    return c - p.mu * prof.flux;
}

SpeedSelection select_speed(const SemiWaveProblem& p) {
    const Ws ws = make_ws(p);
    const Moment ct = min_wave_speed(p.kernel, p.d, p.reaction.f_prime_zero());
    const Moment fhm = p.kernel.first_half_moment();
    if (!fhm.finite)
        throw InapplicableError("select_speed: flux functional diverges for this kernel");
    const double offset = mode_offset(p.mode, p.nu);
    const double lower = std::max(0.0, offset);

    // Theta(c) is guaranteed positive at the threshold speed: the profile
    // degenerates there, so the flux term vanishes while c stays positive.
    // Where no finite threshold exists, Theta(c) >= c - mu * pz * first half
    // moment bounds the root from above.
    double threshold = std::numeric_limits<double>::infinity();
    double c_hi;
    if (ct.finite) {
        threshold = ct.value + offset;
        if (!(threshold > 0.0))
            throw InapplicableError("select_speed: advection at or above the minimal wave speed");
        c_hi = 0.999 * threshold;
    } else {
        c_hi = p.mu * ws.pz * fhm.value + std::abs(offset) + 1.0;
    }

    long iters = 0;
    int evals = 0;
    SemiWaveProfile cur;
    auto theta_at = [&](double c, bool warm) -> double {
        const Eigen::ArrayXd* g = (warm && cur.phi.size() == ws.m) ? &cur.phi : nullptr;
        cur = run_solve(ws, p, c, c - offset, g, &iters);
        ++evals;
        return c - p.mu * cur.flux;
    };

    // Anchor the bracket just above the admissible lower endpoint and shrink
    // the increment until Theta starts negative.
    double inc = 1e-4;
    double c_lo = lower + inc;
    if (!(c_lo < c_hi)) throw NumericError("select_speed: admissible speed window is empty");
    double th_lo = theta_at(c_lo, false);
    while (th_lo >= 0.0) {
        inc /= 10.0;
        if (inc < 1e-12)
            throw NumericError("select_speed: Theta stays nonnegative at the lower endpoint, "
                               "Theta = " +
                               std::to_string(th_lo));
        c_lo = lower + inc;
        th_lo = theta_at(c_lo, true);
    }
    if (std::abs(th_lo) <= 1e-8)
        return SpeedSelection{c_lo, std::move(cur), th_lo, evals};

    double th = th_lo;
    int pushes = 0;
    while (true) {
        if (evals >= 200) throw NumericError("select_speed: evaluation budget exhausted");
        const double mid = 0.5 * (c_lo + c_hi);
        th = theta_at(mid, true);
        if (std::abs(th) <= 1e-8) return SpeedSelection{mid, std::move(cur), th, evals};
        if (th < 0.0)
            c_lo = mid;
        else
            c_hi = mid;
        if (c_hi - c_lo < 1e-15 * std::max(1.0, std::abs(c_hi))) {
            if (ct.finite && th < 0.0 && pushes < 50) {
                // Root hides between the collapsed bracket and the threshold.
                ++pushes;
                c_hi = threshold - 0.1 * (threshold - c_hi);
                continue;
            }
            throw NumericError("select_speed: bisection stalled with |Theta| = " +
                               std::to_string(std::abs(th)));
        }
    }
}

SpeedTriple speed_triple(double d, double nu, double mu, const Kernel& kernel,
                         const Reaction& reaction) {
    if (!(nu >= 0.0)) throw ConfigError("speed_triple: nu must be nonnegative");
    const Moment ct = min_wave_speed(kernel, d, reaction.f_prime_zero());
    if (ct.finite && !(nu < ct.value))
        throw InapplicableError("speed_triple: advection nu must lie below the minimal wave speed");

    SemiWaveProblem base;
    base.d = d;
    base.nu = nu;
    base.mu = mu;
    base.kernel = kernel;
    base.reaction = reaction;
    base.L = std::max(40.0, 40.0 / std::sqrt(reaction.f_prime_zero()));

    SpeedTriple out;
    out.c_tilde = ct;
    auto run = [&](DriftMode mode) {
        SemiWaveProblem q = base;
        q.mode = mode;
        SpeedSelection s = select_speed(q);
        out.evaluations += s.evaluations;
        out.worst_theta_residual = std::max(out.worst_theta_residual, std::abs(s.theta_residual));
        return s.c;
    };
    out.c_star = run(DriftMode::Neutral);
    out.c_r_star = run(DriftMode::Rightward);
    out.c_l_star = run(DriftMode::Leftward);

    if (nu > 0.0) {
        if (!(0.0 < out.c_l_star && out.c_l_star < out.c_star && out.c_star < out.c_r_star))
            throw NumericError("speed_triple: ordering c_l < c_star < c_r violated");
        if (!(out.c_r_star - out.c_star <= nu + 1e-6) ||
            !(out.c_star - out.c_l_star <= nu + 1e-6))
            throw NumericError("speed_triple: speed gaps exceed the advection bound");
    } else {
        if (std::abs(out.c_r_star - out.c_star) > 1e-12 ||
            std::abs(out.c_l_star - out.c_star) > 1e-12)
            throw NumericError("speed_triple: fronts must coincide without advection");
    }
    return out;
}

SandwichSpeeds sandwich_speeds(double d, double nu, double mu, const Kernel& kernel, double eps) {
    if (!(eps > 0.0 && eps < 0.5))
        throw ConfigError("sandwich_speeds: eps must lie in (0, 0.5)");
    auto select_with = [&](const Reaction& re, DriftMode mode) {
        SemiWaveProblem q;
        q.d = d;
        q.nu = nu;
        q.mu = mu;
        q.kernel = kernel;
        q.reaction = re;
        q.mode = mode;
        return select_speed(q).c;
    };
    const Reaction up = Reaction::logistic_upper(eps);
    const Reaction lo = Reaction::logistic_lower(eps);
    const Reaction mid = Reaction::logistic();

    SandwichSpeeds out;
    out.c_r_star = select_with(mid, DriftMode::Rightward);
    out.c_l_star = select_with(mid, DriftMode::Leftward);
    out.c_r_upper = select_with(up, DriftMode::Rightward);
    out.c_r_lower = select_with(lo, DriftMode::Rightward);
    out.c_l_upper = select_with(up, DriftMode::Leftward);
    out.c_l_lower = select_with(lo, DriftMode::Leftward);

    if (!(out.c_r_lower < out.c_r_star && out.c_r_star < out.c_r_upper) ||
        !(out.c_l_lower < out.c_l_star && out.c_l_star < out.c_l_upper))
        throw NumericError("sandwich_speeds: perturbed speeds must bracket the unperturbed one");
    return out;
}

}  // namespace nlfb
