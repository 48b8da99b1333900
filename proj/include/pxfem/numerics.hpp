#pragma once

#include <cstddef>
#include <span>

namespace pxfem {

/// Pairwise (cascade) summation. Deterministic for a fixed input order and
/// more accurate than a running sum on long arrays.
double pairwise_sum(std::span<const double> values);

}  // namespace pxfem
