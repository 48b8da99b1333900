#include "pxfem/dc_solver.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "pxfem/linear_system.hpp"
#include "pxfem/numerics.hpp"

namespace pxfem {

void DCConfig::validate() const {
    const double rho_max = 0.5 * (1.0 + std::sqrt(5.0));
    if (!(rho > 0.0) || !(rho < rho_max)) {
        throw std::invalid_argument("DCConfig: rho must lie in (0, (1+sqrt(5))/2)");
    }
    if (r != 1.0) {
        throw std::invalid_argument("DCConfig: only the augmentation factor r = 1 is supported");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("DCConfig: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("DCConfig: max_iter must be >= 1");
    if (!(cg_tol > 0.0)) throw std::invalid_argument("DCConfig: cg_tol must be positive");
    if (!(scalar_tol > 0.0)) throw std::invalid_argument("DCConfig: scalar_tol must be positive");
}

void ConvergenceLog::write_csv(std::ostream& out) const {
    out << "iter,residual,J_value\n";
    char buf[64];
    const auto emit = [&](double v) {
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        out.write(buf, res.ptr - buf);
    };
    for (const auto& it : iterations) {
        out << it.iter << ',';
        emit(it.residual);
        out << ',';
        emit(it.energy);
        out << '\n';
    }
}

void ConvergenceLog::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_csv(out);
}

double scalar_solve(double q, double c, double scalar_tol) {
    if (!(q > 1.0) || !(q <= 2.0)) {
        throw std::invalid_argument("scalar_solve: q must lie in (1, 2]");
    }
    if (!(c >= 0.0) || !std::isfinite(c)) {
        throw std::invalid_argument("scalar_solve: c must be finite and >= 0");
    }
    if (c == 0.0) return 0.0;

    const double target = scalar_tol * std::max(1.0, c);
    // g(b) = b^(q-1) + b - c is increasing with g(0) = -c <= 0 <= g(c).
    double lo = 0.0, hi = c;
    double b = 0.5 * c;
    for (int iter = 0; iter < 200; ++iter) {
        const double g = std::pow(b, q - 1.0) + b - c;
        if (std::abs(g) <= target) return b;
        if (g > 0.0) {
            hi = b;
        } else {
            lo = b;
        }
        const double dg = (q - 1.0) * std::pow(b, q - 2.0) + 1.0;
        double next = b - g / dg;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (next == b) return b;  // interval exhausted at machine precision
        b = next;
    }
    return b;
}

CellVectorField eta_update(const CellVectorField& lambda_cur,
                           const CellVectorField& grad_u,
                           const VariableExponent& exponent, const Mesh& mesh,
                           double scalar_tol) {
    if (lambda_cur.mesh != &mesh || grad_u.mesh != &mesh) {
        throw std::invalid_argument("eta_update: fields live on a different mesh");
    }
    CellVectorField eta = make_cell_vector_field(mesh);
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const Vec2 v = lambda_cur.values[c] + grad_u.values[c];
        const double len = norm(v);
        if (len == 0.0) continue;
        const double b = scalar_solve(exponent(mesh.barycenters[c]), len, scalar_tol);
        eta.values[c] = v * (b / len);
    }
    return eta;
}

namespace {

double splitting_residual(const CellVectorField& grad_u,
                          const CellVectorField& eta, const Mesh& mesh) {
    std::vector<double> cell_terms(mesh.cell_count());
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const Vec2 d = grad_u.values[c] - eta.values[c];
        cell_terms[c] = mesh.areas[c] * dot(d, d);
    }
    return std::sqrt(pairwise_sum(cell_terms));
}

}  // namespace

DCResult dc_iterate(const std::function<double(Vec2)>& f,
                    const VariableExponent& exponent, const NodalField& g,
                    const Mesh& mesh, const DCConfig& config) {
    config.validate();
    if (g.mesh != &mesh) {
        throw std::invalid_argument("dc_iterate: boundary field lives on a different mesh");
    }
    if (!(exponent.upper_bound() <= 2.0)) {
        throw std::invalid_argument("dc_iterate: requires p2 <= 2");
    }
    const QuadratureRule& rule = triangle_rule(5);

    const SparseSymmetricMatrix matrix = assemble_stiffness(mesh);
    const LinearSystemWorkspace workspace(matrix, mesh.boundary_vertex);

    // the source term of the load vector does not change across iterations
    const CellVectorField zero = make_cell_vector_field(mesh);
    const std::vector<double> rhs_f = assemble_rhs(f, zero, zero, mesh, rule);

    // exponent at barycenters, checked once
    std::vector<double> p_bar(mesh.cell_count());
    for (int c = 0; c < mesh.cell_count(); ++c) {
        p_bar[c] = exponent(mesh.barycenters[c]);
    }

    // frozen quadrature samples for the per-iteration energy values
    const int nq = rule.size();
    std::vector<double> p_quad(static_cast<std::size_t>(mesh.cell_count()) * nq);
    std::vector<double> f_quad(p_quad.size());
    {
        std::size_t i = 0;
        for (int c = 0; c < mesh.cell_count(); ++c) {
            for (int q = 0; q < nq; ++q, ++i) {
                const Vec2 x = mesh.cell_point(c, rule.points[q]);
                p_quad[i] = exponent(x);
                f_quad[i] = f(x);
            }
        }
    }
    std::vector<double> energy_terms(mesh.cell_count());
    const auto energy_of = [&](const NodalField& u,
                               const CellVectorField& grad_u) {
        std::size_t i = 0;
        for (int c = 0; c < mesh.cell_count(); ++c) {
            const double len = norm(grad_u.values[c]);
            double s = 0.0;
            for (int q = 0; q < nq; ++q, ++i) {
                const double p = p_quad[i];
                s += rule.weights[q] *
                     (std::pow(len, p) / p -
                      f_quad[i] * value_on_cell(u, c, rule.points[q]));
            }
            energy_terms[c] = mesh.areas[c] * s;
        }
        return pairwise_sum(energy_terms);
    };

    DCResult result;
    DCState& state = result.state;
    state.u = make_nodal_field(mesh);
    state.eta = make_cell_vector_field(mesh);
    state.lambda = make_cell_vector_field(mesh);
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        if (mesh.boundary_vertex[i]) state.u.values[i] = g.values[i];
    }

    std::vector<double> rhs(mesh.vertex_count());
    for (int n = 1; n <= config.max_iter; ++n) {
        // (M1) linear step: constant stiffness, load from eta and lambda
        for (int i = 0; i < mesh.vertex_count(); ++i) rhs[i] = rhs_f[i];
        for (int c = 0; c < mesh.cell_count(); ++c) {
            const auto& t = mesh.triangles[c];
            const auto& bg = mesh.basis_gradients[c];
            const Vec2 w = state.eta.values[c] - state.lambda.values[c];
            for (int a = 0; a < 3; ++a) {
                rhs[t[a]] += mesh.areas[c] * dot(w, bg[a]);
            }
        }
        state.u.values = workspace.solve(rhs, g.values, config.cg_tol,
                                         &state.u.values);

        // (M2) per-cell nonlinear step
        const CellVectorField grad_u = cell_gradients(state.u);
        CellVectorField eta = make_cell_vector_field(mesh);
        for (int c = 0; c < mesh.cell_count(); ++c) {
            const Vec2 v = state.lambda.values[c] + grad_u.values[c];
            const double len = norm(v);
            if (len == 0.0) continue;
            const double b = scalar_solve(p_bar[c], len, config.scalar_tol);
            eta.values[c] = v * (b / len);
        }
        state.eta = eta;

        // multiplier step
        for (int c = 0; c < mesh.cell_count(); ++c) {
            state.lambda.values[c] +=
                config.rho * (grad_u.values[c] - eta.values[c]);
        }

        state.n = n;
        state.residual = splitting_residual(grad_u, state.eta, mesh);
        result.log.iterations.push_back(
            {n, state.residual, energy_of(state.u, grad_u)});
        if (state.residual <= config.tol) {
            state.converged = true;
            break;
        }
    }
    return result;
}

double fem_residual(const NodalField& u, const std::function<double(Vec2)>& f,
                    const VariableExponent& exponent, const Mesh& mesh,
                    const QuadratureRule& rule) {
    if (u.mesh != &mesh) {
        throw std::invalid_argument("fem_residual: field lives on a different mesh");
    }
    std::vector<double> defect(mesh.vertex_count(), 0.0);
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const auto& t = mesh.triangles[c];
        const auto& bg = mesh.basis_gradients[c];
        const double area = mesh.areas[c];
        const Vec2 gu = gradient_on_cell(u, c);
        const double len = norm(gu);

        // int_cell |grad u|^(p(x)-2) dx; the flux vanishes with grad u
        double s = 0.0;
        if (len > 0.0) {
            for (int q = 0; q < rule.size(); ++q) {
                const double p = exponent(mesh.cell_point(c, rule.points[q]));
                s += rule.weights[q] * std::pow(len, p - 2.0);
            }
            s *= area;
        }
        for (int a = 0; a < 3; ++a) {
            defect[t[a]] += s * dot(gu, bg[a]);
        }
        for (int q = 0; q < rule.size(); ++q) {
            const auto& bary = rule.points[q];
            const double fw =
                area * rule.weights[q] * f(mesh.cell_point(c, bary));
            for (int a = 0; a < 3; ++a) {
                defect[t[a]] -= fw * bary[a];
            }
        }
    }
    double worst = 0.0;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        if (!mesh.boundary_vertex[i]) {
            worst = std::max(worst, std::abs(defect[i]));
        }
    }
    return worst;
}

double discrete_energy(const NodalField& u, const std::function<double(Vec2)>& f,
                       const VariableExponent& exponent, const Mesh& mesh,
                       const QuadratureRule& rule) {
    if (u.mesh != &mesh) {
        throw std::invalid_argument("discrete_energy: field lives on a different mesh");
    }
    std::vector<double> cell_terms(mesh.cell_count());
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const double len = norm(gradient_on_cell(u, c));
        double s = 0.0;
        for (int q = 0; q < rule.size(); ++q) {
            const Vec2 x = mesh.cell_point(c, rule.points[q]);
            const double p = exponent(x);
            s += rule.weights[q] *
                 (std::pow(len, p) / p -
                  f(x) * value_on_cell(u, c, rule.points[q]));
        }
        cell_terms[c] = mesh.areas[c] * s;
    }
    return pairwise_sum(cell_terms);
}

}  // namespace pxfem
