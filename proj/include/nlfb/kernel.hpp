#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nlfb {

// A possibly-divergent integral value. Divergence is a tagged state, never a
// sentinel double.
struct Moment {
    double value = 0.0;
    bool finite = true;

    static Moment of(double v) { return Moment{v, true}; }
    static Moment infinite() { return Moment{0.0, false}; }
};

enum class KernelFamily {
    Gaussian,
    Laplace,
    SmoothBump,
    PowerCubic,      // (1+|x|)^-3, finite first moment, no exponential moment
    PowerQuadratic,  // (1/2)(1+|x|)^-2, infinite first moment
    CutOff,          // base restricted to [-r, r], renormalized to unit mass
};

struct AssumptionReport {
    bool holds_J = false;          // even, nonnegative, unit mass, positive at 0
    bool holds_Jstar = false;      // finite first half-moment
    bool holds_Jstarstar = false;  // finite exponential moment for some lambda > 0
};

// Immutable, value-semantic dispersal kernel. All densities are even and
// normalized to unit mass at construction.
class Kernel {
  public:
    static Kernel gaussian(double sigma);
    static Kernel laplace(double beta);  // (beta/2) e^{-beta |x|}
    static Kernel bump(double radius);   // mollifier supported on [-radius, radius]
    static Kernel power_cubic();
    static Kernel power_quadratic();
    static Kernel cutoff(const Kernel& base, double radius);

    KernelFamily family() const { return family_; }
    double param() const { return param_; }  // sigma / beta / radius; 0 for power families
    const Kernel& base() const;              // CutOff only

    double eval(double x) const;        // density J(x)
    double tail_mass(double a) const;   // \int_a^inf J
    Moment first_half_moment() const;   // \int_0^inf x J(x) dx
    Moment exp_moment(double lambda) const;     // \int e^{lambda x} J(x) dx
    Moment tail_mass_integral(double a) const;  // \int_a^inf tail_mass(s) ds, a >= 0

    std::optional<double> support_radius() const;  // finite support only
    AssumptionReport validate() const;
    std::string describe() const;

  private:
    Kernel() = default;

    double half_moment_segment(double a, double b) const;  // \int_a^b x J(x) dx, 0<=a<=b

    KernelFamily family_ = KernelFamily::Gaussian;
    double param_ = 1.0;
    double norm_ = 1.0;  // SmoothBump amplitude / CutOff interior mass
    std::shared_ptr<const Kernel> base_;
};

// Compactly supported approximations J_n = J * 1_{[-r_n, r_n]} / mass(r_n) for
// strictly increasing radii; each element satisfies all kernel assumptions.
std::vector<Kernel> cutoff_sequence(const Kernel& base, const std::vector<double>& radii);

}  // namespace nlfb
