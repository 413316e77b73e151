#pragma once
// ===== experiment orchestration: scans, slope measurement, bounds =====

#include <vector>

#include "nlfb/fbsolver.hpp"

namespace nlfb {

struct SlopePair {
    double h_slope = 0.0;  // least-squares slope of h(t)
    double g_slope = 0.0;  // least-squares slope of -g(t)
};

struct ScanPoint {
    double mu = 0.0;
    Outcome outcome = Outcome::Undecided;
    double t_end = 0.0;  // horizon actually used (after any doubling)
};

struct MuBracket {
    double mu_lo = 0.0;  // vanishing side
    double mu_hi = 0.0;  // spreading side
    std::vector<ScanPoint> history;  // every classified point, in evaluation order
};

struct VanishingBound {
    double mu_tilde_star = 0.0;
    double lambda = 0.0;  // principal eigenvalue at h_tilde, negative
    double gamma = 0.0;   // minimal multiplier with gamma * phi >= u0 node-wise
    double h_tilde = 0.0;
    double h_star = 0.0;
    Outcome confirmation = Outcome::Undecided;  // run at mu_tilde_star / 2
};

struct AccelerationReport {
    std::vector<double> checkpoints;
    std::vector<double> ratios;  // h(t_i) / t_i
    bool accelerating = false;   // every ratio >= 1.1 x its predecessor
    std::vector<double> cutoff_radii;
    std::vector<double> cutoff_slopes;  // finite h slopes of the truncated kernels
    bool cutoff_increasing = false;
};

// Least-squares front speeds over the trailing window of samples.
SlopePair measure_speeds(const Trajectory& traj, double window_fraction = 0.5);

// Bisection in mu between a vanishing and a spreading endpoint. Undecided
// outcomes double the horizon up to twice before counting as failures.
MuBracket dichotomy_scan(const SolverConfig& base, const InitialProfile& profile, double mu_lo,
                         double mu_hi, double tol_rel);

// lambda (h0 - h_tilde) / (4 h_tilde gamma): positive, since lambda < 0 and
// h0 < h_tilde.
double vanishing_mu_formula(double lambda, double h0, double h_tilde, double gamma);

// Explicit sufficient bound for vanishing: expansion coefficients mu below the
// returned value are guaranteed to vanish; confirmed by a run at half the bound.
VanishingBound vanishing_mu_bound(const SolverConfig& cfg, const InitialProfile& profile,
                                  double h_tilde);

// Front-speed ratios h(t_i)/t_i for a kernel with infinite first moment, plus
// finite-speed control runs on its cutoff truncations.
AccelerationReport acceleration_check(const SolverConfig& cfg, const InitialProfile& profile,
                                      const std::vector<double>& checkpoints,
                                      const std::vector<double>& cutoff_radii);

}  // namespace nlfb
