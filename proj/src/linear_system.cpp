#include "pxfem/linear_system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pxfem {

SparseSymmetricMatrix::SparseSymmetricMatrix(int dim, std::vector<int> row_ptr,
                                             std::vector<int> col_idx,
                                             std::vector<double> values)
    : dim_(dim),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
    if (row_ptr_.size() != static_cast<std::size_t>(dim_) + 1 ||
        col_idx_.size() != values_.size()) {
        throw std::invalid_argument("SparseSymmetricMatrix: inconsistent CSR arrays");
    }
}

double SparseSymmetricMatrix::value(int i, int j) const {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
        if (col_idx_[k] == j) return values_[k];
    }
    return 0.0;
}

void SparseSymmetricMatrix::multiply(const std::vector<double>& x,
                                     std::vector<double>& y) const {
    y.assign(dim_, 0.0);
    for (int i = 0; i < dim_; ++i) {
        double s = 0.0;
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            s += values_[k] * x[col_idx_[k]];
        }
        y[i] = s;
    }
}

SparseSymmetricMatrix assemble_stiffness(const Mesh& mesh) {
    const int n = mesh.vertex_count();

    // pattern: vertex neighbourhoods from cell connectivity
    std::vector<std::vector<int>> adjacency(n);
    for (const auto& t : mesh.triangles) {
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                adjacency[t[a]].push_back(t[b]);
            }
        }
    }
    std::vector<int> row_ptr(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        auto& nb = adjacency[i];
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        row_ptr[i + 1] = row_ptr[i] + static_cast<int>(nb.size());
    }
    std::vector<int> col_idx(row_ptr[n]);
    for (int i = 0; i < n; ++i) {
        std::copy(adjacency[i].begin(), adjacency[i].end(),
                  col_idx.begin() + row_ptr[i]);
    }
    std::vector<double> values(row_ptr[n], 0.0);

    const auto entry_slot = [&](int i, int j) {
        const auto first = col_idx.begin() + row_ptr[i];
        const auto last = col_idx.begin() + row_ptr[i + 1];
        return std::lower_bound(first, last, j) - col_idx.begin();
    };

    // accumulate element matrices in fixed cell order
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const auto& t = mesh.triangles[c];
        const auto& g = mesh.basis_gradients[c];
        const double area = mesh.areas[c];
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                values[entry_slot(t[a], t[b])] += area * dot(g[a], g[b]);
            }
        }
    }
    return SparseSymmetricMatrix(n, std::move(row_ptr), std::move(col_idx),
                                 std::move(values));
}

std::vector<double> assemble_rhs(const std::function<double(Vec2)>& f,
                                 const CellVectorField& eta_prev,
                                 const CellVectorField& lambda_cur,
                                 const Mesh& mesh, const QuadratureRule& rule) {
    if (eta_prev.mesh != &mesh || lambda_cur.mesh != &mesh) {
        throw std::invalid_argument("assemble_rhs: fields live on a different mesh");
    }
    std::vector<double> rhs(mesh.vertex_count(), 0.0);
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const auto& t = mesh.triangles[c];
        const auto& g = mesh.basis_gradients[c];
        const double area = mesh.areas[c];
        const Vec2 w = eta_prev.values[c] - lambda_cur.values[c];
        for (int a = 0; a < 3; ++a) {
            rhs[t[a]] += area * dot(w, g[a]);
        }
        for (int q = 0; q < rule.size(); ++q) {
            const auto& bary = rule.points[q];
            const double fw = area * rule.weights[q] *
                              f(mesh.cell_point(c, bary));
            for (int a = 0; a < 3; ++a) {
                rhs[t[a]] += fw * bary[a];
            }
        }
    }
    return rhs;
}

LinearSystemWorkspace::LinearSystemWorkspace(
    const SparseSymmetricMatrix& matrix,
    const std::vector<std::uint8_t>& boundary_mask)
    : matrix_(matrix), mask_(boundary_mask) {
    if (static_cast<int>(mask_.size()) != matrix_.dim()) {
        throw std::invalid_argument("LinearSystemWorkspace: mask size mismatch");
    }
    global_to_free_.assign(matrix_.dim(), -1);
    for (int i = 0; i < matrix_.dim(); ++i) {
        if (!mask_[i]) {
            global_to_free_[i] = static_cast<int>(free_index_.size());
            free_index_.push_back(i);
        }
    }
    const std::size_t nf = free_index_.size();
    r_.resize(nf);
    p_.resize(nf);
    Ap_.resize(nf);
    x_.resize(nf);
}

std::vector<double> LinearSystemWorkspace::solve(
    const std::vector<double>& rhs, const std::vector<double>& boundary_values,
    double tol, const std::vector<double>* warm_start,
    std::vector<double>* residual_history, int max_iterations) const {
    const int n = matrix_.dim();
    const int nf = free_count();
    if (static_cast<int>(rhs.size()) != n ||
        static_cast<int>(boundary_values.size()) != n) {
        throw std::invalid_argument("solve: vector size mismatch");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
    if (max_iterations < 0) max_iterations = 10 * std::max(nf, 1);

    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (mask_[i]) out[i] = boundary_values[i];
    }
    if (nf == 0) return out;

    const auto& row_ptr = matrix_.row_ptr();
    const auto& col_idx = matrix_.col_idx();
    const auto& values = matrix_.values();

    // fold Dirichlet data: b~_i = rhs_i - sum_{j constrained} M_ij g_j
    std::vector<double> b(nf);
    double b_norm2 = 0.0;
    for (int fi = 0; fi < nf; ++fi) {
        const int i = free_index_[fi];
        double s = rhs[i];
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            const int j = col_idx[k];
            if (mask_[j]) s -= values[k] * boundary_values[j];
        }
        b[fi] = s;
        b_norm2 += s * s;
    }
    const double b_norm = std::sqrt(b_norm2);
    if (b_norm == 0.0) {
        return out;  // zero reduced right-hand side: zero free part
    }

    // matvec restricted to free vertices
    const auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (int fi = 0; fi < nf; ++fi) {
            const int i = free_index_[fi];
            double s = 0.0;
            for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
                const int j = col_idx[k];
                const int fj = global_to_free_[j];
                if (fj >= 0) s += values[k] * x[fj];
            }
            y[fi] = s;
        }
    };

    if (warm_start != nullptr) {
        for (int fi = 0; fi < nf; ++fi) x_[fi] = (*warm_start)[free_index_[fi]];
    } else {
        std::fill(x_.begin(), x_.end(), 0.0);
    }

    apply(x_, Ap_);
    double rr = 0.0;
    for (int fi = 0; fi < nf; ++fi) {
        r_[fi] = b[fi] - Ap_[fi];
        rr += r_[fi] * r_[fi];
    }
    p_ = r_;
    if (residual_history) residual_history->push_back(std::sqrt(rr));

    const double target = tol * b_norm;
    int iter = 0;
    while (std::sqrt(rr) > target) {
        if (iter >= max_iterations) {
            throw ConvergenceError(
                "conjugate gradients: residual " + std::to_string(std::sqrt(rr)) +
                    " above target " + std::to_string(target) + " after " +
                    std::to_string(iter) + " iterations",
                std::sqrt(rr), iter);
        }
        apply(p_, Ap_);
        double pAp = 0.0;
        for (int fi = 0; fi < nf; ++fi) pAp += p_[fi] * Ap_[fi];
        if (!(pAp > 0.0)) {
            throw ConvergenceError("conjugate gradients: non-positive curvature",
                                   std::sqrt(rr), iter);
        }
        const double alpha = rr / pAp;
        double rr_next = 0.0;
        for (int fi = 0; fi < nf; ++fi) {
            x_[fi] += alpha * p_[fi];
            r_[fi] -= alpha * Ap_[fi];
            rr_next += r_[fi] * r_[fi];
        }
        const double beta = rr_next / rr;
        for (int fi = 0; fi < nf; ++fi) {
            p_[fi] = r_[fi] + beta * p_[fi];
        }
        rr = rr_next;
        ++iter;
        if (residual_history) residual_history->push_back(std::sqrt(rr));
    }

    for (int fi = 0; fi < nf; ++fi) out[free_index_[fi]] = x_[fi];
    return out;
}

std::vector<double> solve_dirichlet(const SparseSymmetricMatrix& matrix,
                                    const std::vector<double>& rhs,
                                    const std::vector<std::uint8_t>& boundary_mask,
                                    const std::vector<double>& boundary_values,
                                    double tol) {
    return LinearSystemWorkspace(matrix, boundary_mask)
        .solve(rhs, boundary_values, tol);
}

}  // namespace pxfem
