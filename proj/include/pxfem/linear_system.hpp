#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "pxfem/mesh.hpp"
#include "pxfem/quadrature.hpp"

namespace pxfem {

/// Sparse symmetric matrix in CSR form. Entries are assembled cell by cell
/// in a fixed order, so M(i,j) and M(j,i) accumulate the same values in the
/// same order and the stored matrix is exactly symmetric.
class SparseSymmetricMatrix {
  public:
    SparseSymmetricMatrix(int dim, std::vector<int> row_ptr,
                          std::vector<int> col_idx, std::vector<double> values);

    int dim() const { return dim_; }

    /// Stored entry (i, j), or 0 for positions outside the pattern.
    double value(int i, int j) const;

    /// y = M x.
    void multiply(const std::vector<double>& x, std::vector<double>& y) const;

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

  private:
    int dim_;
    std::vector<int> row_ptr_;
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

/// P1 Laplacian stiffness matrix, integral of grad(phi_i).grad(phi_j).
/// Exact up to rounding (the integrands are cellwise constant).
SparseSymmetricMatrix assemble_stiffness(const Mesh& mesh);

/// Load vector F_j = integral of f phi_j plus integral of
/// (eta_prev - lambda_cur).grad(phi_j). The f term uses the quadrature
/// rule; the vector term is exact (constants per cell).
std::vector<double> assemble_rhs(const std::function<double(Vec2)>& f,
                                 const CellVectorField& eta_prev,
                                 const CellVectorField& lambda_cur,
                                 const Mesh& mesh, const QuadratureRule& rule);

/// Thrown when the conjugate gradient loop fails to reach its tolerance or
/// detects loss of positive definiteness.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
    double residual() const { return residual_; }
    int iterations() const { return iterations_; }

  private:
    double residual_;
    int iterations_;
};

/// Dirichlet-constrained CG solver. Boundary values are folded into the
/// right-hand side (symmetric elimination) and the reduced system on free
/// vertices is solved by plain conjugate gradients; boundary coefficients
/// are set exactly. Reusable across solves on the same matrix/mask: holds
/// the free-vertex index map and scratch vectors.
class LinearSystemWorkspace {
  public:
    LinearSystemWorkspace(const SparseSymmetricMatrix& matrix,
                          const std::vector<std::uint8_t>& boundary_mask);

    /// Solves M u = rhs with u = boundary_values on masked vertices,
    /// relative residual <= tol on the free part. `warm_start`, when given,
    /// seeds the CG iteration; `residual_history` receives the residual
    /// 2-norms per iteration (including the initial one).
    std::vector<double> solve(const std::vector<double>& rhs,
                              const std::vector<double>& boundary_values,
                              double tol,
                              const std::vector<double>* warm_start = nullptr,
                              std::vector<double>* residual_history = nullptr,
                              int max_iterations = -1) const;

    int free_count() const { return static_cast<int>(free_index_.size()); }

  private:
    const SparseSymmetricMatrix& matrix_;
    std::vector<std::uint8_t> mask_;
    std::vector<int> free_index_;   // free slot -> global vertex
    std::vector<int> global_to_free_;
    // scratch buffers, reused across solves
    mutable std::vector<double> r_, p_, Ap_, x_;
};

/// One-shot convenience wrapper around LinearSystemWorkspace.
std::vector<double> solve_dirichlet(const SparseSymmetricMatrix& matrix,
                                    const std::vector<double>& rhs,
                                    const std::vector<std::uint8_t>& boundary_mask,
                                    const std::vector<double>& boundary_values,
                                    double tol);

}  // namespace pxfem
