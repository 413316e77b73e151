#include "nlfb/fbsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlfb/eigenvalue.hpp"
#include "nlfb/errors.hpp"

namespace nlfb {

namespace {

struct Ws {
    int n = 0;
    double dy = 0.0;
    Eigen::ArrayXd y, tw;
    Eigen::ArrayXd K, conv, rhs1, rhs2, wm;
};

Ws make_ws(int n) {
    Ws ws;
    ws.n = n;
    ws.dy = 2.0 / (n - 1);
    ws.y = symmetric_grid(n);
    ws.tw = trapezoid_weights(n, ws.dy);
    ws.K.resize(n);
    ws.conv.resize(n);
    ws.rhs1.resize(n);
    ws.rhs2.resize(n);
    ws.wm.resize(n);
    return ws;
}

// J((y_i - y_j)/A)/A sampled on the uniform grid: one row suffices (Toeplitz).
void kernel_row(const Ws& ws, const Kernel& kernel, double halfspan, Eigen::ArrayXd& K) {
    for (int m = 0; m < ws.n; ++m) {
        K[m] = kernel.eval(static_cast<double>(m) * ws.dy * halfspan) * halfspan;
    }
}

// Trapezoid convolution accumulated center-out in mirrored pairs, so the
// result is bitwise mirror-symmetric whenever w is.
void convolve(const Ws& ws, const Eigen::ArrayXd& K, const Eigen::ArrayXd& w,
              Eigen::ArrayXd& out) {
    const int n = ws.n;
    for (int i = 0; i < n; ++i) {
        double s = K[0] * ws.tw[i] * w[i];
        const int kmax = std::max(i, n - 1 - i);
        for (int k = 1; k <= kmax; ++k) {
            const int jl = i - k;
            const int jr = i + k;
            const double tl = (jl >= 0) ? K[k] * ws.tw[jl] * w[jl] : 0.0;
            const double tr = (jr < n) ? K[k] * ws.tw[jr] * w[jr] : 0.0;
            s += tl + tr;
        }
        out[i] = s;
    }
}

// Front velocities; the g-sum runs in descending order so that it mirrors the
// h-sum bitwise for symmetric data.
std::pair<double, double> flux_ws(const Ws& ws, const Eigen::ArrayXd& w, double g, double h,
                                  const Kernel& kernel, double mu) {
    const double hs = 0.5 * (h - g);
    double sh = 0.0;
    for (int j = 0; j < ws.n; ++j) {
        sh += ws.tw[j] * w[j] * kernel.tail_mass((1.0 - ws.y[j]) * hs);
    }
    double sg = 0.0;
    for (int j = ws.n - 1; j >= 0; --j) {
        sg += ws.tw[j] * w[j] * kernel.tail_mass((1.0 + ws.y[j]) * hs);
    }
    return {-mu * hs * sg, mu * hs * sh};
}

struct Rates {
    double dg = 0.0;
    double dh = 0.0;
};

Rates rhs_ws(Ws& ws, const Eigen::ArrayXd& w, double g, double h, const SolverConfig& cfg,
             Eigen::ArrayXd& out) {
    const double span = h - g;
    if (!(span > 0.0)) throw NumericError("fbsolver: fronts collapsed");
    auto [gr, hr] = flux_ws(ws, w, g, h, cfg.kernel, cfg.mu);
    kernel_row(ws, cfg.kernel, 0.5 * span, ws.K);
    convolve(ws, ws.K, w, ws.conv);
    const double A = 2.0 / span;
    const double inv_dy = 1.0 / ws.dy;
    out[0] = 0.0;
    out[ws.n - 1] = 0.0;
    for (int i = 1; i < ws.n - 1; ++i) {
        const double B = -(ws.y[i] * (hr - gr) + (hr + gr)) / span;
        const double a = cfg.nu * A + B;
        double dw;
        if (a > 0.0) {
            dw = (w[i] - w[i - 1]) * inv_dy;
        } else if (a < 0.0) {
            dw = (w[i + 1] - w[i]) * inv_dy;
        } else {
            dw = 0.0;
        }
        out[i] = cfg.d * (ws.conv[i] - w[i]) - a * dw + cfg.reaction.raw(w[i]);
    }
    return {gr, hr};
}

double stable_dt(const Ws& ws, const FbState& s, const SolverConfig& cfg) {
    const double span = s.h - s.g;
    if (!(span > 0.0)) throw NumericError("fbsolver: fronts collapsed");
    const double A = 2.0 / span;
    double amax = 0.0;
    for (int i = 1; i < ws.n - 1; ++i) {
        const double B = -(ws.y[i] * (s.h_rate - s.g_rate) + (s.h_rate + s.g_rate)) / span;
        amax = std::max(amax, std::abs(cfg.nu * A + B));
    }
    double dt = std::min(1.0 / (2.0 * cfg.d), 1.0 / (2.0 * cfg.reaction.f_prime_zero()));
    if (amax > 0.0) dt = std::min(dt, ws.dy / amax);
    return cfg.cfl * dt;
}

double step_ws(FbState& s, const SolverConfig& cfg, Ws& ws, double t_cap) {
    double dt = stable_dt(ws, s, cfg);
    if (t_cap > s.t) dt = std::min(dt, t_cap - s.t);
    if (!(dt > 0.0) || dt < 1e-13) throw NumericError("fbsolver: time step underflow");

    const Rates r1 = rhs_ws(ws, s.w, s.g, s.h, cfg, ws.rhs1);
    const double half = 0.5 * dt;
    ws.wm = s.w + half * ws.rhs1;
    const double gm = s.g + half * r1.dg;
    const double hm = s.h + half * r1.dh;
    const Rates r2 = rhs_ws(ws, ws.wm, gm, hm, cfg, ws.rhs2);

    s.w += dt * ws.rhs2;
    s.g += dt * r2.dg;
    s.h += dt * r2.dh;
    s.t += dt;
    s.w[0] = 0.0;
    s.w[ws.n - 1] = 0.0;
    for (int i = 1; i < ws.n - 1; ++i) {
        if (s.w[i] < 0.0) {
            ++s.clamp_count;
            s.w[i] = 0.0;
        }
    }
    auto [gr, hr] = flux_ws(ws, s.w, s.g, s.h, cfg.kernel, cfg.mu);
    s.g_rate = gr;
    s.h_rate = hr;
    return dt;
}

void validate_config(const SolverConfig& cfg) {
    if (!(cfg.d > 0.0)) throw ConfigError("solver: d must be positive");
    if (!(cfg.nu >= 0.0)) throw ConfigError("solver: nu must be nonnegative");
    // mu = 0 is the degenerate frozen-front case (fluxes vanish identically);
    // config files still require mu > 0.
    if (!(cfg.mu >= 0.0)) throw ConfigError("solver: mu must be nonnegative");
    if (!(cfg.h0 > 0.0)) throw ConfigError("solver: h0 must be positive");
    if (cfg.n < 64) throw ConfigError("solver: n must be at least 64");
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) throw ConfigError("solver: cfl must lie in (0, 1]");
    if (!(cfg.t_end > 0.0)) throw ConfigError("solver: t_end must be positive");
    if (cfg.snapshot_every < 1) throw ConfigError("solver: snapshot_every must be >= 1");
}

}  // namespace

Eigen::ArrayXd symmetric_grid(int n) {
    if (n < 2) throw ConfigError("grid: needs at least two nodes");
    Eigen::ArrayXd y(n);
    const double den = static_cast<double>(n - 1);
    for (int i = 0; i < n / 2; ++i) {
        const double v = static_cast<double>(n - 1 - 2 * i) / den;
        y[i] = -v;
        y[n - 1 - i] = v;
    }
    if (n % 2 == 1) y[n / 2] = 0.0;
    return y;
}

Eigen::ArrayXd trapezoid_weights(int n, double dx) {
    Eigen::ArrayXd tw = Eigen::ArrayXd::Constant(n, dx);
    tw[0] = 0.5 * dx;
    tw[n - 1] = 0.5 * dx;
    return tw;
}

InitialProfile InitialProfile::parabolic(double amplitude) {
    if (!(amplitude > 0.0)) throw ConfigError("initial profile: amplitude must be positive");
    InitialProfile p;
    p.amplitude_ = amplitude;
    return p;
}

InitialProfile InitialProfile::custom(std::vector<double> values) {
    if (values.size() < 3) throw ConfigError("initial profile: custom array too short");
    InitialProfile p;
    p.amplitude_ = 0.0;
    p.custom_ = std::move(values);
    return p;
}

double InitialProfile::eval_at(double x, double h0) const {
    if (std::abs(x) >= h0) return 0.0;
    if (is_parabolic()) {
        const double s = x / h0;
        return amplitude_ * (1.0 - s * s);
    }
    const int n = static_cast<int>(custom_.size());
    const double pos = (x / h0 + 1.0) * 0.5 * (n - 1);
    const int i0 = std::clamp(static_cast<int>(std::floor(pos)), 0, n - 2);
    const double frac = pos - i0;
    return custom_[static_cast<std::size_t>(i0)] * (1.0 - frac) +
           custom_[static_cast<std::size_t>(i0) + 1] * frac;
}

FbState init_state(const SolverConfig& cfg, const InitialProfile& profile) {
    validate_config(cfg);
    FbState s;
    s.t = 0.0;
    s.h = cfg.h0;
    s.g = -cfg.h0;
    const Eigen::ArrayXd y = symmetric_grid(cfg.n);
    s.w.resize(cfg.n);
    if (profile.is_parabolic()) {
        for (int i = 0; i < cfg.n; ++i) {
            s.w[i] = profile.amplitude() * (1.0 - y[i] * y[i]);
        }
    } else {
        if (static_cast<int>(profile.values().size()) != cfg.n) {
            throw ConfigError("initial profile: custom array length must equal n");
        }
        double wmax = 0.0;
        for (int i = 0; i < cfg.n; ++i) {
            const double v = profile.values()[static_cast<std::size_t>(i)];
            if ((i == 0 || i == cfg.n - 1) && v != 0.0) {
                throw ConfigError("initial profile: endpoints must vanish");
            }
            if (v < 0.0) throw ConfigError("initial profile: interior must be nonnegative");
            wmax = std::max(wmax, v);
            s.w[i] = v;
        }
        if (!(wmax > 0.0)) throw ConfigError("initial profile: identically zero");
    }
    Ws ws = make_ws(cfg.n);
    auto [gr, hr] = flux_ws(ws, s.w, s.g, s.h, cfg.kernel, cfg.mu);
    s.g_rate = gr;
    s.h_rate = hr;
    return s;
}

std::pair<double, double> transform_coeffs(double y, double g, double h, double g_rate,
                                           double h_rate) {
    const double span = h - g;
    if (!(span > 0.0)) throw NumericError("transform: fronts collapsed");
    const double A = 2.0 / span;
    const double B = -(y * (h_rate - g_rate) + (h_rate + g_rate)) / span;
    return {A, B};
}

Eigen::ArrayXd nonlocal_term(const FbState& s, const Kernel& kernel, double d) {
    const int n = static_cast<int>(s.w.size());
    Ws ws = make_ws(n);
    kernel_row(ws, kernel, 0.5 * (s.h - s.g), ws.K);
    convolve(ws, ws.K, s.w, ws.conv);
    return d * (ws.conv - s.w);
}

std::pair<double, double> boundary_flux(const FbState& s, const Kernel& kernel, double mu) {
    Ws ws = make_ws(static_cast<int>(s.w.size()));
    return flux_ws(ws, s.w, s.g, s.h, kernel, mu);
}

double step(FbState& s, const SolverConfig& cfg) {
    Ws ws = make_ws(cfg.n);
    return step_ws(s, cfg, ws, -1.0);
}

Trajectory simulate(const SolverConfig& cfg, const InitialProfile& profile) {
    FbState s = init_state(cfg, profile);
    Ws ws = make_ws(cfg.n);
    Trajectory traj;

    auto push_sample = [&](const FbState& st) {
        traj.t.push_back(st.t);
        traj.g.push_back(st.g);
        traj.h.push_back(st.h);
        traj.h_rate.push_back(st.h_rate);
        traj.g_rate.push_back(st.g_rate);
        traj.max_w.push_back(st.w.maxCoeff());
        double m = 0.0;
        for (int j = 0; j < ws.n; ++j) m += ws.tw[j] * st.w[j];
        traj.mass.push_back(m * 0.5 * (st.h - st.g));
    };
    auto push_snapshot = [&](const FbState& st) {
        Snapshot sn;
        sn.t = st.t;
        sn.u = st.w;
        sn.x.resize(ws.n);
        const double hs = 0.5 * (st.h - st.g);
        const double c = 0.5 * (st.h + st.g);
        for (int j = 0; j < ws.n; ++j) sn.x[j] = ws.y[j] * hs + c;
        traj.snapshots.push_back(std::move(sn));
    };

    std::size_t sample_idx = 0;
    push_sample(s);
    push_snapshot(s);
    long guard = 500000000L;
    while (s.t < cfg.t_end * (1.0 - 1e-12)) {
        step_ws(s, cfg, ws, cfg.t_end);
        ++sample_idx;
        push_sample(s);
        if (sample_idx % static_cast<std::size_t>(cfg.snapshot_every) == 0) push_snapshot(s);
        if (--guard <= 0) throw NumericError("fbsolver: step budget exhausted");
    }
    traj.final_w = s.w;
    traj.clamp_count = s.clamp_count;
    return traj;
}

Outcome classify_outcome(const Trajectory& traj, const SolverConfig& cfg, double ref_length) {
    if (traj.t.size() < 2) throw ConfigError("classify: trajectory too short");
    if (traj.t.back() < 0.8 * cfg.t_end) {
        throw ConfigError("classify: trajectory covers less than 80% of t_end");
    }
    const std::size_t k = traj.t.size() - 1;
    if (traj.max_w[k] < 1e-3 && (traj.h_rate[k] - traj.g_rate[k]) < 1e-6) {
        return Outcome::Vanishing;
    }
    const double span = traj.h[k] - traj.g[k];
    const int n = static_cast<int>(traj.final_w.size());
    const Eigen::ArrayXd y = symmetric_grid(n);
    double core_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        if (std::abs(y[i]) <= 0.5) core_min = std::min(core_min, traj.final_w[i]);
    }
    if (span > 4.0 * ref_length && core_min >= 0.5 * cfg.reaction.positive_zero()) {
        return Outcome::Spreading;
    }
    return Outcome::Undecided;
}

Outcome classify_outcome(const Trajectory& traj, const SolverConfig& cfg) {
    const double f0 = cfg.reaction.f_prime_zero();
    double ref = cfg.h0;
    if (f0 < cfg.d) {
        ref = critical_length(cfg.d, f0, cfg.nu, cfg.kernel, 1e-4).h_star;
    }
    return classify_outcome(traj, cfg, ref);
}

}  // namespace nlfb
