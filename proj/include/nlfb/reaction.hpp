#pragma once

#include <string>

namespace nlfb {

enum class ReactionFamily {
    Logistic,       // u(1-u)
    LogisticUpper,  // u(1 - u/(1+eps)), dominates the logistic term
    LogisticLower,  // u(1 - u/(1-eps)), dominated by it
};

// Monostable (KPP) reaction term f(u) = u (1 - u/phi) with positive zero phi.
class Reaction {
  public:
    static Reaction logistic();
    static Reaction logistic_upper(double eps);
    static Reaction logistic_lower(double eps);

    // Checked evaluation; the model only ever evaluates f on [0, k0].
    double operator()(double u) const;
    // Unchecked formula, used inside time steppers where roundoff may produce
    // values a few ulp outside the domain.
    double raw(double u) const { return u * (1.0 - u / phi_); }

    double f_prime_zero() const { return 1.0; }
    double positive_zero() const { return phi_; }
    double k0() const { return phi_ + 1.0; }

    // KPP structure on a u-grid: f(0)=f(phi)=0, f>0 on (0,phi), f'(0)>0>f'(phi),
    // f(u)/u nonincreasing.
    bool validate_kpp(int grid = 512) const;

    ReactionFamily family() const { return family_; }
    double eps() const { return eps_; }
    std::string describe() const;

  private:
    Reaction(ReactionFamily fam, double eps, double phi) : family_(fam), eps_(eps), phi_(phi) {}

    ReactionFamily family_;
    double eps_;
    double phi_;
};

}  // namespace nlfb
