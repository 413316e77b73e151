#pragma once
// ===== semi-wave profiles and front-speed selection =====
// Profiles solve, on the truncated half-line [-L, 0],
//   d * int_{-inf}^{0} J(x - y) Phi(y) dy - d Phi + beta Phi' + f(Phi) = 0,
//   Phi(0) = 0,  Phi == positive_zero for x < -L (constant extension),
// with the effective drift beta = c - nu, c, c + nu for the rightward,
// neutral, and leftward fronts.  The selected front speed is the root of
//   Theta(c) = c - mu * M(c),   M(c) = int_{-inf}^{0} Phi^c(x) tail_mass(-x) dx.

#include <Eigen/Dense>

#include "nlfb/kernel.hpp"
#include "nlfb/reaction.hpp"

namespace nlfb {

enum class DriftMode { Rightward, Neutral, Leftward };

struct SemiWaveProblem {
    double d = 1.0;
    double nu = 0.0;
    double mu = 1.0;
    Kernel kernel = Kernel::gaussian(1.0);
    Reaction reaction = Reaction::logistic();
    DriftMode mode = DriftMode::Neutral;
    double L = 40.0;
    int m = 0;  // nodes on [-L, 0], odd; 0 selects spacing <= 0.05
};

struct SemiWaveProfile {
    double c = 0.0;
    Eigen::ArrayXd x;        // nodes on [-L, 0]
    Eigen::ArrayXd phi;      // nonincreasing, phi(0) = 0
    double far_level = 0.0;  // extension level (positive zero of the reaction)
    double residual = 0.0;   // BVP residual, max norm over x in [-L+5, -dx]
    double flux = 0.0;       // M(c); NaN when the tail correction diverges
};

struct SpeedSelection {
    double c = 0.0;
    SemiWaveProfile profile;
    double theta_residual = 0.0;
    int evaluations = 0;  // profile solves spent
};

struct SpeedTriple {
    double c_l_star = 0.0;
    double c_star = 0.0;
    double c_r_star = 0.0;
    Moment c_tilde = Moment::infinite();
    int evaluations = 0;
    double worst_theta_residual = 0.0;
};

struct SandwichSpeeds {
    double c_r_lower = 0.0;  // perturbed-lower reaction, rightward
    double c_r_upper = 0.0;  // perturbed-upper reaction, rightward
    double c_l_lower = 0.0;
    double c_l_upper = 0.0;
    double c_r_star = 0.0;  // unperturbed roots for comparison
    double c_l_star = 0.0;
};

// +nu, 0, -nu for Rightward, Neutral, Leftward.
double mode_offset(DriftMode mode, double nu);

// Minimal whole-line wave speed by linear determinacy:
// min over lambda > 0 of [d (exp_moment(lambda) - 1) + f0] / lambda.
// Infinite when the kernel has no finite exponential moment.
Moment min_wave_speed(const Kernel& kernel, double d, double f0);

// Parabolic relaxation to the semi-wave profile at speed c (optionally from a
// warm-start guess on the same grid).
SemiWaveProfile solve_profile(const SemiWaveProblem& p, double c);
SemiWaveProfile solve_profile(const SemiWaveProblem& p, double c, const Eigen::ArrayXd* guess);

// M(c): trapezoid over [-L, 0] plus the analytic far-field correction.
double flux_functional(const SemiWaveProfile& profile, const Kernel& kernel);

// Theta(c) = c - mu * M(c) on a cold profile.
double theta(const SemiWaveProblem& p, double c);

// Root of Theta by bisection; |Theta| <= 1e-8 at the returned speed.
SpeedSelection select_speed(const SemiWaveProblem& p);

// Speeds of the leftward, non-advective, and rightward fronts.
SpeedTriple speed_triple(double d, double nu, double mu, const Kernel& kernel,
                         const Reaction& reaction);

// Speed brackets from the perturbed reactions f_eps.
SandwichSpeeds sandwich_speeds(double d, double nu, double mu, const Kernel& kernel, double eps);

}  // namespace nlfb
