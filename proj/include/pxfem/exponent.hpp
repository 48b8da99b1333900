#pragma once

#include <functional>
#include <vector>

#include "pxfem/mesh.hpp"
#include "pxfem/quadrature.hpp"
#include "pxfem/vec2.hpp"

namespace pxfem {

/// Variable exponent p(x) with verified essential bounds 1 < p1 <= p2.
/// Every evaluation is checked against [p1, p2] (with a small floating
/// slack); a value outside the claimed range throws std::domain_error.
class VariableExponent {
  public:
    VariableExponent(std::function<double(Vec2)> p, double p1, double p2);

    double operator()(Vec2 x) const;
    double lower_bound() const { return p1_; }
    double upper_bound() const { return p2_; }

  private:
    std::function<double(Vec2)> p_;
    double p1_;
    double p2_;
};

VariableExponent constant_exponent(double p);

/// |field| sampled at every quadrature point of every cell, cell-major:
/// entry c * rule.size() + q belongs to cell c, point q.
using QuadSamples = std::vector<double>;

QuadSamples sample_abs_nodal(const NodalField& field, const QuadratureRule& rule);
QuadSamples sample_abs_gradient(const NodalField& field, const QuadratureRule& rule);
QuadSamples sample_abs_function(const std::function<double(Vec2)>& f,
                                const Mesh& mesh, const QuadratureRule& rule);

/// Modular: quadrature approximation of the integral of |u|^p(x). Zero iff
/// the samples are all zero. Cell contributions are combined by pairwise
/// summation in cell order, so the result is run-to-run identical.
double modular(const QuadSamples& abs_values, const VariableExponent& exponent,
               const Mesh& mesh, const QuadratureRule& rule);

/// Luxemburg norm: the k > 0 at which the modular of u/k equals 1, located
/// by bracketing and bisection on the strictly decreasing map
/// k -> modular(u/k); 0 when the modular vanishes. The returned k satisfies
/// |modular(u/k) - 1| <= 1e-12.
double luxemburg_norm(const QuadSamples& abs_values,
                      const VariableExponent& exponent, const Mesh& mesh,
                      const QuadratureRule& rule);

/// Sobolev norm of a P1 field: Luxemburg norm of |u| plus Luxemburg norm of
/// |grad u| (cellwise constant).
double w1p_norm(const NodalField& field, const VariableExponent& exponent,
                const Mesh& mesh, const QuadratureRule& rule);

/// Norm of the difference between an analytic function and a P1 field,
/// with the analytic value and gradient evaluated directly at quadrature
/// points (no interpolation of the analytic part).
double w1p_error_norm(const std::function<double(Vec2)>& u,
                      const std::function<Vec2(Vec2)>& grad_u,
                      const NodalField& field, const VariableExponent& exponent,
                      const Mesh& mesh, const QuadratureRule& rule);

/// Monotone flux map |xi|^(p-2) xi, extended by 0 at xi = 0.
Vec2 flux(Vec2 xi, double p_val);

/// Inner product (flux(xi) - flux(eta)) . (xi - eta); strictly positive for
/// xi != eta.
double check_monotonicity(Vec2 xi, Vec2 eta, double p_val);

/// Largest |p(x)-p(y)| * log(e + 1/|x-y|) over sampled vertex pairs; a
/// diagnostic estimate of the log-Holder constant of the exponent. Samples
/// all pairs up to `max_pairs`, then a deterministic subset.
double log_holder_estimate(const VariableExponent& exponent, const Mesh& mesh,
                           std::size_t max_pairs = 200000);

}  // namespace pxfem
