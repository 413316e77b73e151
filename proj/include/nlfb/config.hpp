#pragma once
// ===== experiment configuration: strict JSON schema =====

#include <string>
#include <vector>

#include "nlfb/fbsolver.hpp"
#include "nlfb/semiwave.hpp"

namespace nlfb {

enum class ExperimentKind {
    Simulate,
    Eigen,
    CriticalLength,
    SemiWave,
    Speeds,
    DichotomyScan,
    AccelerationCheck,
    VanishingBound,
};

struct EigenParams {
    double a0 = 1.0;
    double h = 1.0;
    int nodes = 0;  // 0 selects the spacing-based default
};

struct SemiWaveParams {
    DriftMode mode = DriftMode::Neutral;
    double L = 40.0;
    int nodes = 0;
};

struct DichotomyParams {
    double mu_lo = 0.0;
    double mu_hi = 0.0;
    double tol_rel = 0.05;
};

struct AccelParams {
    std::vector<double> checkpoints{20.0, 40.0};
    std::vector<double> cutoff_radii{5.0, 10.0, 20.0};
};

struct VanishingParams {
    double h_tilde = 0.0;
};

struct LabConfig {
    SolverConfig solver;
    InitialProfile profile = InitialProfile::parabolic(1.0);
    ExperimentKind experiment = ExperimentKind::Simulate;
    std::string output_dir = "out";
    bool emit_timing = false;  // wall_time goes to summary.json only on request
    EigenParams eigen;
    SemiWaveParams semiwave;
    DichotomyParams dichotomy;
    AccelParams accel;
    VanishingParams vanishing;
    std::vector<std::string> warnings;  // standing-assumption violations; run proceeds
};

// Strict parsing: unknown keys are rejected with their full field path, types
// are enforced, and every default is documented in the README schema table.
LabConfig parse_config(const std::string& path);
LabConfig parse_config_text(const std::string& text);

// Compact kernel specs used by CLI flags and config strings:
//   gaussian:SIGMA | laplace:BETA | bump:RADIUS | power3 | power2
//   | cutoff:RADIUS:<base spec>
Kernel parse_kernel_spec(const std::string& spec);

// Compact reaction specs: logistic | logistic_upper:EPS | logistic_lower:EPS.
Reaction parse_reaction_spec(const std::string& spec);

}  // namespace nlfb
