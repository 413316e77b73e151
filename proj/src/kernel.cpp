#include "nlfb/kernel.hpp"

#include <cmath>
#include <sstream>

#include "nlfb/errors.hpp"
#include "nlfb/quadrature.hpp"

namespace nlfb {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310005;

double bump_shape(double x, double r) {
    const double s = x / r;
    const double q = 1.0 - s * s;
    if (q <= 0.0) return 0.0;
    return std::exp(-1.0 / q);
}
}  // namespace

Kernel Kernel::gaussian(double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("gaussian kernel: sigma must be positive");
    Kernel k;
    k.family_ = KernelFamily::Gaussian;
    k.param_ = sigma;
    return k;
}

Kernel Kernel::laplace(double beta) {
    if (!(beta > 0.0)) throw ConfigError("laplace kernel: beta must be positive");
    Kernel k;
    k.family_ = KernelFamily::Laplace;
    k.param_ = beta;
    return k;
}

Kernel Kernel::bump(double radius) {
    if (!(radius > 0.0)) throw ConfigError("bump kernel: radius must be positive");
    Kernel k;
    k.family_ = KernelFamily::SmoothBump;
    k.param_ = radius;
    const double mass =
        adaptive_quad([radius](double x) { return bump_shape(x, radius); }, -radius, radius);
    k.norm_ = 1.0 / mass;
    return k;
}

Kernel Kernel::power_cubic() {
    Kernel k;
    k.family_ = KernelFamily::PowerCubic;
    k.param_ = 0.0;
    return k;
}

Kernel Kernel::power_quadratic() {
    Kernel k;
    k.family_ = KernelFamily::PowerQuadratic;
    k.param_ = 0.0;
    return k;
}

Kernel Kernel::cutoff(const Kernel& base, double radius) {
    if (!(radius > 0.0)) throw ConfigError("cutoff kernel: radius must be positive");
    if (auto sr = base.support_radius(); sr && radius >= *sr) {
        throw ConfigError("cutoff kernel: radius must lie inside the base support");
    }
    Kernel k;
    k.family_ = KernelFamily::CutOff;
    k.param_ = radius;
    k.base_ = std::make_shared<Kernel>(base);
    k.norm_ = 1.0 - 2.0 * base.tail_mass(radius);  // interior mass before renormalization
    if (!(k.norm_ > 0.0)) throw NumericError("cutoff kernel: interior mass vanished");
    return k;
}

const Kernel& Kernel::base() const {
    if (!base_) throw ConfigError("kernel: base() is only defined for cutoff kernels");
    return *base_;
}

double Kernel::eval(double x) const {
    const double ax = std::abs(x);
    switch (family_) {
        case KernelFamily::Gaussian: {
            const double s = ax / param_;
            return std::exp(-0.5 * s * s) / (param_ * kSqrt2Pi);
        }
        case KernelFamily::Laplace:
            return 0.5 * param_ * std::exp(-param_ * ax);
        case KernelFamily::SmoothBump:
            return norm_ * bump_shape(ax, param_);
        case KernelFamily::PowerCubic: {
            const double b = 1.0 + ax;
            return 1.0 / (b * b * b);
        }
        case KernelFamily::PowerQuadratic: {
            const double b = 1.0 + ax;
            return 0.5 / (b * b);
        }
        case KernelFamily::CutOff:
            if (ax > param_) return 0.0;
            return base_->eval(ax) / norm_;
    }
    return 0.0;
}

double Kernel::tail_mass(double a) const {
    if (a < 0.0) return 1.0 - tail_mass(-a);  // evenness, unit mass
    switch (family_) {
        case KernelFamily::Gaussian:
            return 0.5 * std::erfc(a / (param_ * std::sqrt(2.0)));
        case KernelFamily::Laplace:
            return 0.5 * std::exp(-param_ * a);
        case KernelFamily::SmoothBump: {
            if (a >= param_) return 0.0;
            return adaptive_quad([this](double x) { return eval(x); }, a, param_);
        }
        case KernelFamily::PowerCubic: {
            const double b = 1.0 + a;
            return 0.5 / (b * b);
        }
        case KernelFamily::PowerQuadratic:
            return 0.5 / (1.0 + a);
        case KernelFamily::CutOff: {
            if (a >= param_) return 0.0;
            return (base_->tail_mass(a) - base_->tail_mass(param_)) / norm_;
        }
    }
    return 0.0;
}

Moment Kernel::first_half_moment() const {
    switch (family_) {
        case KernelFamily::Gaussian:
            return Moment::of(param_ / kSqrt2Pi);
        case KernelFamily::Laplace:
            return Moment::of(0.5 / param_);
        case KernelFamily::SmoothBump:
            return Moment::of(
                adaptive_quad([this](double x) { return x * eval(x); }, 0.0, param_));
        case KernelFamily::PowerCubic:
            return Moment::of(0.5);
        case KernelFamily::PowerQuadratic:
            return Moment::infinite();
        case KernelFamily::CutOff:
            return Moment::of(base_->half_moment_segment(0.0, param_) / norm_);
    }
    return Moment::infinite();
}

Moment Kernel::exp_moment(double lambda) const {
    const double l = std::abs(lambda);  // evenness
    switch (family_) {
        case KernelFamily::Gaussian: {
            const double sl = param_ * l;
            return Moment::of(std::exp(0.5 * sl * sl));
        }
        case KernelFamily::Laplace: {
            const double b = param_;
            if (l >= b) return Moment::infinite();
            return Moment::of(b * b / ((b - l) * (b + l)));
        }
        case KernelFamily::SmoothBump:
        case KernelFamily::CutOff: {
            const double r = param_;
            // 2 \int_0^r cosh(l x) J(x) dx; finite for every l (compact support)
            return Moment::of(adaptive_quad(
                [this, l](double x) { return 2.0 * std::cosh(l * x) * eval(x); }, 0.0, r,
                QuadratureOptions{1e-10 * std::max(1.0, std::exp(l * r)), 10000}));
        }
        case KernelFamily::PowerCubic:
        case KernelFamily::PowerQuadratic:
            if (l == 0.0) return Moment::of(1.0);
            return Moment::infinite();
    }
    return Moment::infinite();
}

double Kernel::half_moment_segment(double a, double b) const {
    if (!(0.0 <= a && a <= b)) throw ConfigError("kernel: half_moment_segment needs 0 <= a <= b");
    switch (family_) {
        case KernelFamily::Gaussian: {
            const double s2 = param_ * param_;
            return s2 * (eval(a) - eval(b));
        }
        case KernelFamily::Laplace: {
            const double ib = 1.0 / param_;
            auto F = [&](double x) { return -0.5 * (x + ib) * std::exp(-param_ * x); };
            return F(b) - F(a);
        }
        case KernelFamily::PowerCubic: {
            auto F = [](double x) {
                const double u = 1.0 + x;
                return -1.0 / u + 0.5 / (u * u);
            };
            return F(b) - F(a);
        }
        case KernelFamily::PowerQuadratic: {
            auto F = [](double x) {
                const double u = 1.0 + x;
                return 0.5 * (std::log(u) + 1.0 / u);
            };
            return F(b) - F(a);
        }
        case KernelFamily::SmoothBump: {
            const double hi = std::min(b, param_);
            if (hi <= a) return 0.0;
            return adaptive_quad([this](double x) { return x * eval(x); }, a, hi);
        }
        case KernelFamily::CutOff: {
            const double hi = std::min(b, param_);
            if (hi <= a) return 0.0;
            return base_->half_moment_segment(a, hi) / norm_;
        }
    }
    return 0.0;
}

Moment Kernel::tail_mass_integral(double a) const {
    if (!(a >= 0.0)) throw ConfigError("kernel: tail_mass_integral needs a >= 0");
    switch (family_) {
        case KernelFamily::Gaussian: {
            const double s2 = param_ * param_;
            return Moment::of(s2 * eval(a) - a * tail_mass(a));
        }
        case KernelFamily::Laplace:
            return Moment::of(tail_mass(a) / param_);
        case KernelFamily::PowerCubic:
            return Moment::of(0.5 / (1.0 + a));
        case KernelFamily::PowerQuadratic:
            return Moment::infinite();
        case KernelFamily::SmoothBump:
        case KernelFamily::CutOff: {
            const double r = param_;
            if (a >= r) return Moment::of(0.0);
            // \int_a^r tail(s) ds = \int_a^r (s-a) J(s) ds + (r-a) tail(r); tail(r)=0 here
            return Moment::of(half_moment_segment(a, r) - a * (tail_mass(a) - tail_mass(r)));
        }
    }
    return Moment::infinite();
}

std::optional<double> Kernel::support_radius() const {
    if (family_ == KernelFamily::SmoothBump || family_ == KernelFamily::CutOff) return param_;
    return std::nullopt;
}

AssumptionReport Kernel::validate() const {
    AssumptionReport r;
    r.holds_J = true;  // all built-in families: even, nonnegative, unit mass, positive at 0
    r.holds_Jstar = first_half_moment().finite;
    switch (family_) {
        case KernelFamily::PowerCubic:
        case KernelFamily::PowerQuadratic:
            r.holds_Jstarstar = false;
            break;
        default:
            r.holds_Jstarstar = true;
            break;
    }
    return r;
}

std::string Kernel::describe() const {
    std::ostringstream os;
    switch (family_) {
        case KernelFamily::Gaussian: os << "gaussian(sigma=" << param_ << ")"; break;
        case KernelFamily::Laplace: os << "laplace(beta=" << param_ << ")"; break;
        case KernelFamily::SmoothBump: os << "bump(radius=" << param_ << ")"; break;
        case KernelFamily::PowerCubic: os << "power3"; break;
        case KernelFamily::PowerQuadratic: os << "power2"; break;
        case KernelFamily::CutOff:
            os << "cutoff(" << base_->describe() << ", radius=" << param_ << ")";
            break;
    }
    return os.str();
}

std::vector<Kernel> cutoff_sequence(const Kernel& base, const std::vector<double>& radii) {
    if (radii.empty()) throw ConfigError("cutoff_sequence: needs at least one radius");
    std::vector<Kernel> out;
    out.reserve(radii.size());
    double prev = 0.0;
    for (double r : radii) {
        if (!(r > prev)) throw ConfigError("cutoff_sequence: radii must be strictly increasing");
        prev = r;
        out.push_back(Kernel::cutoff(base, r));
    }
    return out;
}

}  // namespace nlfb
