#include "nlfb/quadrature.hpp"

#include <cmath>

#include "nlfb/errors.hpp"

namespace nlfb {

namespace {

struct SimpsonState {
    const std::function<double(double)>& f;
    int budget;
};

double simpson(double fa, double fm, double fb, double width) {
    return width * (fa + 4.0 * fm + fb) / 6.0;
}

double recurse(SimpsonState& st, double a, double b, double fa, double fm, double fb,
               double whole, double tol) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = st.f(lm);
    const double frm = st.f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || (b - a) < 1e-14 * (1.0 + std::abs(a) + std::abs(b))) {
        return left + right + delta / 15.0;
    }
    if (--st.budget <= 0) {
        throw NumericError("adaptive quadrature: subdivision budget exhausted");
    }
    return recurse(st, a, m, fa, flm, fm, left, 0.5 * tol) +
           recurse(st, m, b, fm, frm, fb, right, 0.5 * tol);
}

}  // namespace

double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     QuadratureOptions opt) {
    if (!(b >= a)) {
        throw ConfigError("adaptive quadrature: requires b >= a");
    }
    if (a == b) {
        return 0.0;
    }
    SimpsonState st{f, opt.max_subdivisions};
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    return recurse(st, a, b, fa, fm, fb, whole, opt.abs_tol);
}

}  // namespace nlfb
