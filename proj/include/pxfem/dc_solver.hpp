#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "pxfem/exponent.hpp"
#include "pxfem/mesh.hpp"
#include "pxfem/quadrature.hpp"

namespace pxfem {

/// Parameters of the decomposition-coordination iteration. The multiplier
/// step rho must lie in (0, (1+sqrt(5))/2); only the augmentation factor
/// r = 1 is supported (that is the variant whose per-cell update reduces to
/// the scalar equation b^(q-1) + b = c).
struct DCConfig {
    double rho = 1.0;
    double r = 1.0;
    double tol = 1e-8;          // stop on the splitting residual |grad u - eta|
    int max_iter = 5000;
    double cg_tol = 1e-10;      // relative residual of each linear solve
    double scalar_tol = 1e-14;  // per-cell scalar equation tolerance

    void validate() const;
};

struct DCIteration {
    int iter;
    double residual;  // cell-L2 norm of grad(u_n) - eta_n
    double energy;    // J(u_n) = int |grad u|^p / p - int f u
};

struct ConvergenceLog {
    std::vector<DCIteration> iterations;

    /// CSV with header "iter,residual,J_value".
    void write_csv(std::ostream& out) const;
    void write_csv(const std::string& path) const;
};

struct DCState {
    int n = 0;
    NodalField u;
    CellVectorField eta;
    CellVectorField lambda;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
};

struct DCResult {
    DCState state;
    ConvergenceLog log;
};

/// Unique b >= 0 with b^(q-1) + b = c, for q in (1,2] and c >= 0, to
/// |b^(q-1) + b - c| <= scalar_tol * max(1, c). Safeguarded Newton on the
/// bracket [0, c]; b = 0 exactly when c = 0.
double scalar_solve(double q, double c, double scalar_tol = 1e-14);

/// Per-cell minimization step: with v = lambda + grad u, c = |v| and
/// b = scalar_solve(p(barycenter), c), returns eta = v * (b / c) (zero when
/// c = 0). |eta| equals b on every cell.
CellVectorField eta_update(const CellVectorField& lambda_cur,
                           const CellVectorField& grad_u,
                           const VariableExponent& exponent, const Mesh& mesh,
                           double scalar_tol = 1e-14);

/// Runs the splitting iteration for the discrete problem with source f,
/// exponent p and Dirichlet data g (a nodal field whose boundary values are
/// used). Each step solves the constant-matrix linear problem, applies
/// eta_update, and moves the multiplier by rho * (grad u - eta). Stops when
/// the splitting residual drops to config.tol or max_iter is reached (the
/// state is then flagged non-converged; no exception).
DCResult dc_iterate(const std::function<double(Vec2)>& f,
                    const VariableExponent& exponent, const NodalField& g,
                    const Mesh& mesh, const DCConfig& config);

/// Weak-form defect of u against the discrete problem: the largest over
/// interior hat functions phi_j of
/// |int |grad u|^(p(x)-2) grad u . grad phi_j - int f phi_j|, with the
/// exponent evaluated at quadrature points (not at barycenters, so this is
/// an independent check of what the iteration converged to).
double fem_residual(const NodalField& u, const std::function<double(Vec2)>& f,
                    const VariableExponent& exponent, const Mesh& mesh,
                    const QuadratureRule& rule);

/// J(u) = int |grad u|^p(x)/p(x) - int f u, by quadrature.
double discrete_energy(const NodalField& u, const std::function<double(Vec2)>& f,
                       const VariableExponent& exponent, const Mesh& mesh,
                       const QuadratureRule& rule);

}  // namespace pxfem
