#include "nlfb/reaction.hpp"

#include <cmath>
#include <sstream>

#include "nlfb/errors.hpp"

namespace nlfb {

Reaction Reaction::logistic() { return Reaction(ReactionFamily::Logistic, 0.0, 1.0); }

Reaction Reaction::logistic_upper(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw ConfigError("reaction: upper perturbation needs eps in (0,1)");
    }
    return Reaction(ReactionFamily::LogisticUpper, eps, 1.0 + eps);
}

Reaction Reaction::logistic_lower(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw ConfigError("reaction: lower perturbation needs eps in (0,1)");
    }
    return Reaction(ReactionFamily::LogisticLower, eps, 1.0 - eps);
}

double Reaction::operator()(double u) const {
    if (u < 0.0) throw NumericError("reaction: evaluated at negative density");
    return raw(u);
}

bool Reaction::validate_kpp(int grid) const {
    if (grid < 8) return false;
    if (raw(0.0) != 0.0) return false;
    if (std::abs(raw(phi_)) > 1e-12) return false;
    // numerical derivative at 0
    const double h = 1e-7;
    if (std::abs((raw(h) - raw(0.0)) / h - f_prime_zero()) > 1e-5) return false;
    // derivative at the positive zero must be negative
    if ((raw(phi_ + h) - raw(phi_ - h)) / (2.0 * h) >= 0.0) return false;
    double prev_ratio = f_prime_zero();
    for (int k = 1; k < grid; ++k) {
        const double u = phi_ * static_cast<double>(k) / static_cast<double>(grid);
        if (!(raw(u) > 0.0)) return false;
        const double ratio = raw(u) / u;
        if (ratio > prev_ratio + 1e-12) return false;
        prev_ratio = ratio;
    }
    return true;
}

std::string Reaction::describe() const {
    std::ostringstream os;
    switch (family_) {
        case ReactionFamily::Logistic: os << "logistic"; break;
        case ReactionFamily::LogisticUpper: os << "logistic_upper(eps=" << eps_ << ")"; break;
        case ReactionFamily::LogisticLower: os << "logistic_lower(eps=" << eps_ << ")"; break;
    }
    return os.str();
}

}  // namespace nlfb
