#include "pxfem/exponent.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pxfem/numerics.hpp"

namespace pxfem {

VariableExponent::VariableExponent(std::function<double(Vec2)> p, double p1,
                                   double p2)
    : p_(std::move(p)), p1_(p1), p2_(p2) {
    if (!(p1 > 1.0) || !(p2 >= p1) || !std::isfinite(p2)) {
        throw std::invalid_argument(
            "VariableExponent: bounds must satisfy 1 < p1 <= p2 < inf");
    }
}

double VariableExponent::operator()(Vec2 x) const {
    const double v = p_(x);
    const double slack = 1e-12 * std::max(1.0, std::abs(v));
    if (!(v >= p1_ - slack) || !(v <= p2_ + slack)) {
        throw std::domain_error("VariableExponent: value " + std::to_string(v) +
                                " at (" + std::to_string(x.x) + ", " +
                                std::to_string(x.y) + ") outside claimed [" +
                                std::to_string(p1_) + ", " + std::to_string(p2_) +
                                "]");
    }
    return v;
}

VariableExponent constant_exponent(double p) {
    return VariableExponent([p](Vec2) { return p; }, p, p);
}

QuadSamples sample_abs_nodal(const NodalField& field, const QuadratureRule& rule) {
    const Mesh& mesh = *field.mesh;
    QuadSamples out(static_cast<std::size_t>(mesh.cell_count()) * rule.size());
    for (int c = 0; c < mesh.cell_count(); ++c) {
        for (int q = 0; q < rule.size(); ++q) {
            out[static_cast<std::size_t>(c) * rule.size() + q] =
                std::abs(value_on_cell(field, c, rule.points[q]));
        }
    }
    return out;
}

QuadSamples sample_abs_gradient(const NodalField& field, const QuadratureRule& rule) {
    const Mesh& mesh = *field.mesh;
    QuadSamples out(static_cast<std::size_t>(mesh.cell_count()) * rule.size());
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const double g = norm(gradient_on_cell(field, c));
        for (int q = 0; q < rule.size(); ++q) {
            out[static_cast<std::size_t>(c) * rule.size() + q] = g;
        }
    }
    return out;
}

QuadSamples sample_abs_function(const std::function<double(Vec2)>& f,
                                const Mesh& mesh, const QuadratureRule& rule) {
    QuadSamples out(static_cast<std::size_t>(mesh.cell_count()) * rule.size());
    for (int c = 0; c < mesh.cell_count(); ++c) {
        for (int q = 0; q < rule.size(); ++q) {
            out[static_cast<std::size_t>(c) * rule.size() + q] =
                std::abs(f(mesh.cell_point(c, rule.points[q])));
        }
    }
    return out;
}

namespace {

void check_sample_size(const QuadSamples& values, const Mesh& mesh,
                       const QuadratureRule& rule) {
    if (values.size() !=
        static_cast<std::size_t>(mesh.cell_count()) * rule.size()) {
        throw std::invalid_argument("modular: sample count does not match mesh and rule");
    }
}

// Per-quadrature-point measure weight area_c * w_q and exponent value,
// the reusable core of the modular and the Luxemburg bisection.
struct ModularTerms {
    std::vector<double> weight;
    std::vector<double> exponent;

    ModularTerms(const VariableExponent& p, const Mesh& mesh,
                 const QuadratureRule& rule) {
        const std::size_t n =
            static_cast<std::size_t>(mesh.cell_count()) * rule.size();
        weight.resize(n);
        exponent.resize(n);
        std::size_t i = 0;
        for (int c = 0; c < mesh.cell_count(); ++c) {
            for (int q = 0; q < rule.size(); ++q, ++i) {
                weight[i] = mesh.areas[c] * rule.weights[q];
                exponent[i] = p(mesh.cell_point(c, rule.points[q]));
            }
        }
    }
};

double modular_from_terms(const QuadSamples& abs_values, const ModularTerms& terms,
                          int points_per_cell) {
    const std::size_t n = abs_values.size();
    std::vector<double> cell_sums(n / points_per_cell, 0.0);
    std::size_t i = 0;
    for (std::size_t c = 0; c < cell_sums.size(); ++c) {
        double s = 0.0;
        for (int q = 0; q < points_per_cell; ++q, ++i) {
            s += terms.weight[i] * std::pow(abs_values[i], terms.exponent[i]);
        }
        cell_sums[c] = s;
    }
    return pairwise_sum(cell_sums);
}

}  // namespace

double modular(const QuadSamples& abs_values, const VariableExponent& exponent,
               const Mesh& mesh, const QuadratureRule& rule) {
    check_sample_size(abs_values, mesh, rule);
    const ModularTerms terms(exponent, mesh, rule);
    return modular_from_terms(abs_values, terms, rule.size());
}

double luxemburg_norm(const QuadSamples& abs_values,
                      const VariableExponent& exponent, const Mesh& mesh,
                      const QuadratureRule& rule) {
    check_sample_size(abs_values, mesh, rule);
    double vmax = 0.0;
    for (double v : abs_values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("luxemburg_norm: non-finite field value");
        }
        vmax = std::max(vmax, v);
    }
    const ModularTerms terms(exponent, mesh, rule);

    // modular of u/k as sum of a_i k^(-p_i); precompute a_i = weight*|u|^p
    const std::size_t n = abs_values.size();
    std::vector<double> coeff(n);
    for (std::size_t i = 0; i < n; ++i) {
        coeff[i] = terms.weight[i] * std::pow(abs_values[i], terms.exponent[i]);
    }
    std::vector<double> scratch(n);
    const auto scaled_modular = [&](double k) {
        for (std::size_t i = 0; i < n; ++i) {
            scratch[i] = coeff[i] * std::pow(k, -terms.exponent[i]);
        }
        return pairwise_sum(scratch);
    };

    const double rho = pairwise_sum(coeff);
    if (rho == 0.0) return 0.0;
    if (rho == 1.0) return 1.0;

    double k_hi = std::max(1.0, rho) * (1.0 + vmax);
    while (scaled_modular(k_hi) >= 1.0) {
        k_hi *= 2.0;
        if (!std::isfinite(k_hi)) {
            throw std::runtime_error("luxemburg_norm: failed to bracket from above");
        }
    }
    double k_lo = 1.0;
    while (scaled_modular(k_lo) <= 1.0) {
        k_lo *= 0.5;
        if (k_lo < std::numeric_limits<double>::min()) {
            throw std::runtime_error("luxemburg_norm: failed to bracket from below");
        }
    }

    for (int iter = 0; iter < 300; ++iter) {
        const double k = 0.5 * (k_lo + k_hi);
        const double r = scaled_modular(k);
        if (std::abs(r - 1.0) <= 1e-12) return k;
        if (r > 1.0) {
            k_lo = k;
        } else {
            k_hi = k;
        }
    }
    throw std::runtime_error("luxemburg_norm: bisection did not converge");
}

double w1p_norm(const NodalField& field, const VariableExponent& exponent,
                const Mesh& mesh, const QuadratureRule& rule) {
    return luxemburg_norm(sample_abs_nodal(field, rule), exponent, mesh, rule) +
           luxemburg_norm(sample_abs_gradient(field, rule), exponent, mesh, rule);
}

double w1p_error_norm(const std::function<double(Vec2)>& u,
                      const std::function<Vec2(Vec2)>& grad_u,
                      const NodalField& field, const VariableExponent& exponent,
                      const Mesh& mesh, const QuadratureRule& rule) {
    const std::size_t n =
        static_cast<std::size_t>(mesh.cell_count()) * rule.size();
    QuadSamples diff(n), grad_diff(n);
    std::size_t i = 0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const Vec2 gh = gradient_on_cell(field, c);
        for (int q = 0; q < rule.size(); ++q, ++i) {
            const Vec2 x = mesh.cell_point(c, rule.points[q]);
            diff[i] = std::abs(u(x) - value_on_cell(field, c, rule.points[q]));
            grad_diff[i] = norm(grad_u(x) - gh);
        }
    }
    return luxemburg_norm(diff, exponent, mesh, rule) +
           luxemburg_norm(grad_diff, exponent, mesh, rule);
}

Vec2 flux(Vec2 xi, double p_val) {
    const double r = norm(xi);
    if (r == 0.0) return {0.0, 0.0};
    return std::pow(r, p_val - 2.0) * xi;
}

double check_monotonicity(Vec2 xi, Vec2 eta, double p_val) {
    return dot(flux(xi, p_val) - flux(eta, p_val), xi - eta);
}

double log_holder_estimate(const VariableExponent& exponent, const Mesh& mesh,
                           std::size_t max_pairs) {
    const int nv = mesh.vertex_count();
    std::vector<double> pv(nv);
    for (int i = 0; i < nv; ++i) pv[i] = exponent(mesh.vertices[i]);

    double worst = 0.0;
    // deterministic stride so large meshes stay within the pair budget
    const std::size_t total = static_cast<std::size_t>(nv) * (nv - 1) / 2;
    const std::size_t stride = total > max_pairs ? total / max_pairs + 1 : 1;
    std::size_t index = 0;
    for (int i = 0; i < nv; ++i) {
        for (int j = i + 1; j < nv; ++j, ++index) {
            if (index % stride != 0) continue;
            const double d = norm(mesh.vertices[i] - mesh.vertices[j]);
            if (d == 0.0) continue;
            const double q =
                std::abs(pv[i] - pv[j]) * std::log(std::exp(1.0) + 1.0 / d);
            worst = std::max(worst, q);
        }
    }
    return worst;
}

}  // namespace pxfem
