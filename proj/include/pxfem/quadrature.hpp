#pragma once

#include <array>
#include <vector>

namespace pxfem {

/// Symmetric quadrature rule on the reference triangle in barycentric
/// coordinates. Weights are positive and sum to 1, so the integral of f
/// over a physical triangle of area A is A * sum_i w_i f(x_i). `degree` is
/// the highest polynomial degree integrated exactly.
struct QuadratureRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
    int degree = 0;

    int size() const { return static_cast<int>(points.size()); }
};

/// Rule lookup, keyed the same way the CLI exposes it: 5 selects the
/// 7-point degree-5 rule (the default), 12 selects the 12-point degree-6
/// rule. Anything else throws.
const QuadratureRule& triangle_rule(int selector);

}  // namespace pxfem
