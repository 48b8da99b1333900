#pragma once

#include <functional>
#include <optional>

#include "pxfem/exponent.hpp"
#include "pxfem/vec2.hpp"

namespace pxfem {

/// Closed-form Dirichlet benchmark on [-1,1]^2 with zero source, indexed by
/// a parameter b >= 0. For b > 0 the exponent is
/// p(x) = 1 + ((b/2)(x1+x2) + 1 + b)^(-1) and
/// u(x) = (sqrt(2) e^(b+1) / b)(e^((b/2)(x1+x2)) - 1); the flux
/// |grad u|^(p-2) grad u is constant, so u solves the problem exactly.
/// b = 0 degenerates to p = 2 with the linear u = (sqrt(2) e / 2)(x1+x2).
struct BenchmarkCase {
    double b;
    VariableExponent exponent;
    std::function<double(Vec2)> exact_u;
    std::function<Vec2(Vec2)> exact_grad;
    std::function<double(Vec2)> f;  // identically zero
};

/// Builds the benchmark for b >= 0; the exponent carries the tight bounds
/// p1 = 1 + 1/(1+2b) and p2 = 2 (p1 = p2 = 2 for b = 0).
BenchmarkCase make_benchmark(double b);

/// Radially symmetric exact-solution oracle on the unit disk: p(x) = P(r),
/// f(x) = F(r), constant boundary value g. Provides the solution profile
/// U(r), its derivatives and the second-derivative regularity integral, all
/// by adaptive quadrature. Construction rejects degenerate data (F that
/// integrates to zero everywhere) and any sampled radius where the profile
/// flux vanishes while P(r) = 2.
class RadialCase {
  public:
    RadialCase(std::function<double(double)> P, std::function<double(double)> F,
               double g,
               std::optional<std::function<double(double)>> P_prime = std::nullopt,
               int check_samples = 100);

    double P(double r) const { return P_(r); }
    double F(double r) const { return F_(r); }
    double P_prime(double r) const;
    double g() const { return g_; }

  private:
    std::function<double(double)> P_;
    std::function<double(double)> F_;
    double g_;
    std::optional<std::function<double(double)>> P_prime_;
};

/// Z(r) = -(1/r) * integral of t F(t) over [0, r]; Z(0) = 0. Relative
/// quadrature error about 1e-10.
double radial_Z(const RadialCase& c, double r);

/// dZ/dr = -F(r) - Z(r)/r, continuously extended to -F(0)/2 at r = 0.
double radial_Z_prime(const RadialCase& c, double r);

/// U(r) = g - integral over [r, 1] of Z |Z|^((2-P)/(P-1)); U(1) = g exactly.
/// Relative quadrature error about 1e-8.
double radial_U(const RadialCase& c, double r);

/// U'(r) = Z(r) |Z(r)|^((2-P(r))/(P(r)-1)) = sign(Z) |Z|^(1/(P-1)).
double radial_U_prime(const RadialCase& c, double r);

/// U''(r) from the profile flux:
/// (1/(P-1)) Z' |Z|^((2-P)/(P-1)) - (1/(P-1)^2) |Z|^((2-P)/(P-1)) P' log|Z| Z,
/// extended by 0 where Z = 0 and P < 2; Z = 0 with P = 2 throws.
double radial_U_second(const RadialCase& c, double r);

/// 2 pi * integral over [0,1] of (U'')^2 |U'|^(P-2) r + |U'|^P / r, the
/// weighted second-derivative energy of the radial solution. The integrand
/// is continuously extended at r = 0 and at isolated zeros of Z; a
/// divergent or non-finite integrand raises an error naming the radius.
double regularity_integral(const RadialCase& c);

}  // namespace pxfem
