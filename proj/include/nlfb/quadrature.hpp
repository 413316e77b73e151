#pragma once

#include <functional>

namespace nlfb {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    int max_subdivisions = 10000;
};

// Adaptive Simpson on [a, b]. Throws NumericError when the subdivision
// budget is exhausted before the tolerance is met.
double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     QuadratureOptions opt = {});

}  // namespace nlfb
