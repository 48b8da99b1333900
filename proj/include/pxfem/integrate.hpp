#pragma once

#include <functional>

namespace pxfem {

/// Adaptive Simpson quadrature of f over [a, b]. A subinterval is accepted
/// when the classic two-half estimate agrees with the single-panel one to
/// within its share of abs_tol + rel_tol * |integral|; bisection stops at
/// max_depth levels. Non-finite integrand values throw std::domain_error.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, double rel_tol,
                        int max_depth = 40);

}  // namespace pxfem
