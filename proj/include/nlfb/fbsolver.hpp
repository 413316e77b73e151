#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "nlfb/kernel.hpp"
#include "nlfb/reaction.hpp"

namespace nlfb {

// Free-boundary problem on the moving interval (g(t), h(t)), front-fixed to
// y in [-1, 1]: w_t = d*(conv - w) - (nu*A + B) w_y + f(w) with
// A = 2/(h-g), B = -(y (h'-g') + (h'+g')) / (h-g), w(+-1) = 0, and the fronts
// driven by the dispersal mass crossing them.
struct SolverConfig {
    double d = 1.0;
    double nu = 0.0;
    double mu = 1.0;
    double h0 = 1.0;
    Kernel kernel = Kernel::gaussian(1.0);
    Reaction reaction = Reaction::logistic();
    int n = 400;          // nodes on [-1, 1] including the pinned endpoints
    double cfl = 0.5;     // fraction of the stability bound
    double t_end = 10.0;
    int snapshot_every = 100;  // snapshot stride counted in accepted steps
};

struct FbState {
    double t = 0.0;
    double g = -1.0;
    double h = 1.0;
    Eigen::ArrayXd w;  // size n, endpoints pinned to zero
    double g_rate = 0.0;
    double h_rate = 0.0;
    long clamp_count = 0;  // negative values clamped so far (diagnostic)
};

struct Snapshot {
    double t = 0.0;
    Eigen::ArrayXd x;
    Eigen::ArrayXd u;
};

struct Trajectory {
    std::vector<double> t, g, h, h_rate, g_rate, max_w, mass;
    std::vector<Snapshot> snapshots;
    Eigen::ArrayXd final_w;  // field at the last accepted step
    long clamp_count = 0;

    std::size_t samples() const { return t.empty() ? 0 : t.size() - 1; }
};

enum class Outcome { Vanishing, Spreading, Undecided };

class InitialProfile {
  public:
    static InitialProfile parabolic(double amplitude);
    static InitialProfile custom(std::vector<double> values);

    bool is_parabolic() const { return custom_.empty(); }
    double amplitude() const { return amplitude_; }
    const std::vector<double>& values() const { return custom_; }

    // u0 at a physical coordinate for the initial interval (-h0, h0);
    // custom data is interpolated linearly, zero outside.
    double eval_at(double x, double h0) const;

  private:
    InitialProfile() = default;
    double amplitude_ = 1.0;
    std::vector<double> custom_;
};

// Antisymmetric uniform grid on [-1, 1]: y[i] == -y[n-1-i] exactly.
Eigen::ArrayXd symmetric_grid(int n);
Eigen::ArrayXd trapezoid_weights(int n, double dx);

FbState init_state(const SolverConfig& cfg, const InitialProfile& profile);

// (A, B) of the front-fixing transform at a point y.
std::pair<double, double> transform_coeffs(double y, double g, double h, double g_rate,
                                           double h_rate);

// d * (kernel convolution of w over the interval - w), evaluated on all nodes.
Eigen::ArrayXd nonlocal_term(const FbState& s, const Kernel& kernel, double d);

// Front velocities (g_rate, h_rate) from the dispersal mass crossing each front.
std::pair<double, double> boundary_flux(const FbState& s, const Kernel& kernel, double mu);

// One explicit midpoint (RK2) step with adaptive dt; returns the dt taken.
double step(FbState& s, const SolverConfig& cfg);

Trajectory simulate(const SolverConfig& cfg, const InitialProfile& profile);

// ref_length: critical interval half-length when one exists, h0 otherwise.
Outcome classify_outcome(const Trajectory& traj, const SolverConfig& cfg, double ref_length);
Outcome classify_outcome(const Trajectory& traj, const SolverConfig& cfg);

}  // namespace nlfb
