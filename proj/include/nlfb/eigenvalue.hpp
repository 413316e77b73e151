#pragma once
// ===== principal eigenvalue on a finite interval =====
// L phi = d * int_{-h}^{h} J(x - y) phi(y) dy - d phi + a0 phi - nu phi'
// discretized on [-h, h] with trapezoid convolution weights, exterior-zero
// extension, and backward (upwind) differencing of the drift for nu > 0.

#include <Eigen/Dense>

#include "nlfb/kernel.hpp"

namespace nlfb {

struct EigenProblem {
    double d = 1.0;
    double a0 = 0.0;
    double nu = 0.0;
    double h = 1.0;
    Kernel kernel = Kernel::gaussian(1.0);
    int m = 0;  // node count; 0 selects auto_node_count(h)
};

struct EigenResult {
    double lambda_p = 0.0;
    Eigen::VectorXd phi;    // nonnegative eigenfunction, max-normalized to 1
    int iterations = 0;     // linear solves performed
    double residual = 0.0;  // ||A phi - lambda phi||_inf
};

struct CriticalLength {
    double h_star = 0.0;
    double lambda_at_h_star = 0.0;
};

// Smallest node count with spacing <= 0.05 (and at least 128 nodes).
int auto_node_count(double h);

// Dense discretization of L over the nodes.
Eigen::MatrixXd assemble(const EigenProblem& p);

// Dominant (Perron-type) eigenpair via shift-inverted inverse iteration.
EigenResult principal_eigenvalue(const EigenProblem& p);

// Interval half-length h* with lambda_p(h*) = 0; requires f0 < d.
CriticalLength critical_length(double d, double f0, double nu, const Kernel& kernel,
                               double tol = 1e-6);

}  // namespace nlfb
