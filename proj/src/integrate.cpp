#include "pxfem/integrate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pxfem {

namespace {

double checked_eval(const std::function<double(double)>& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
        throw std::domain_error("adaptive_simpson: non-finite integrand at x = " +
                                std::to_string(x));
    }
    return v;
}

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb, double whole, double tol,
               int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = checked_eval(f, lm);
    const double frm = checked_eval(f, rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (depth >= max_depth || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, double rel_tol,
                        int max_depth) {
    if (a == b) return 0.0;
    const double fa = checked_eval(f, a);
    const double fm = checked_eval(f, 0.5 * (a + b));
    const double fb = checked_eval(f, b);
    const double whole = simpson(fa, fm, fb, b - a);
    const double tol = std::max(abs_tol, rel_tol * std::abs(whole));
    double result = recurse(f, a, b, fa, fm, fb, whole, tol, 0, max_depth);
    // one refinement pass when the first estimate badly misjudged the scale
    const double tol2 = std::max(abs_tol, rel_tol * std::abs(result));
    if (tol2 < 0.1 * tol) {
        result = recurse(f, a, b, fa, fm, fb, whole, tol2, 0, max_depth);
    }
    return result;
}

}  // namespace pxfem
