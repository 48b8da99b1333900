#include "pxfem/numerics.hpp"

namespace pxfem {

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace pxfem
