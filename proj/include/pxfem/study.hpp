#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pxfem/dc_solver.hpp"

namespace pxfem {

/// Convergence-study configuration. Grid sides are the per-side vertex
/// counts N^(1/2); the mesh for grid side n is the uniform triangulation of
/// [-1,1]^2 with m = n - 1 squares per side, so the reported dof count
/// n^2 counts all vertices. That convention is echoed in the emitted
/// metadata so the numbers stay interpretable.
struct StudyConfig {
    std::vector<double> b_values;
    std::vector<int> grid_sides;
    DCConfig dc;
    int quad_rule = 5;  // 5 (7-point rule) or 12 (12-point rule)
    std::string out_dir;
    bool plot = false;
    bool dump_solutions = false;
    std::uint64_t seed = 0;  // reserved for randomized suites; studies are deterministic

    void validate() const;
};

/// One study cell: benchmark parameter, grid side, dof count, solution
/// error in the variable-exponent Sobolev norm, iteration count, wall time.
/// `ok` is false when the solve failed; such rows carry NaN errors.
struct StudyRecord {
    double b = 0.0;
    int grid_side = 0;
    long long dof = 0;
    double error = 0.0;
    int iters = 0;
    double seconds = 0.0;
    bool ok = true;
};

/// Least-squares power law through one parameter's records. alpha is the
/// negated slope of log(error) against log(grid_side); C is the prefactor
/// of the fitted model error = C * (grid_side / 2)^(-alpha), i.e. the
/// constant relative to the mesh spacing h = 2 / grid_side.
struct RateFit {
    double b = 0.0;
    double alpha = 0.0;
    double C = 0.0;
    double ssr = 0.0;  // sum of squared log-residuals
};

/// Runs every (b, grid) cell of the study: builds the mesh and benchmark,
/// interpolates the exact solution as Dirichlet data, runs the splitting
/// iteration, and measures the error against the analytic solution and
/// gradient at quadrature points. Failures flag the record and the study
/// continues. Deterministic for a fixed config (wall times aside).
std::vector<StudyRecord> run_study(const StudyConfig& config);

/// Fit over the records of a single b; needs at least 3 records, all with
/// positive errors.
RateFit fit_rate(const std::vector<StudyRecord>& records);

/// Group records by b (in first-appearance order) and fit each group.
std::vector<RateFit> fit_all_rates(const std::vector<StudyRecord>& records);

/// Writes records.csv ("b,grid_side,dof,error,iters,seconds"), fits.csv
/// ("b,alpha,C,ssr"), meta.txt (config echo), and optionally plot.svg (a
/// log-log plot of error against grid side, one series per b). Floats are
/// written in shortest round-trip form.
void emit(const std::vector<StudyRecord>& records,
          const std::vector<RateFit>& fits, const StudyConfig& config);

void write_records_csv(const std::vector<StudyRecord>& records, std::ostream& out);
std::vector<StudyRecord> read_records_csv(std::istream& in);
void write_fits_csv(const std::vector<RateFit>& fits, std::ostream& out);
void write_loglog_svg(const std::vector<StudyRecord>& records, std::ostream& out);

/// Plain-text solution dump: vertex count on the first line, then one
/// coefficient per line in shortest round-trip form.
void write_solution(const NodalField& field, const std::string& path);
std::vector<double> read_solution(const std::string& path);

std::string solution_filename(double b, int grid_side);

}  // namespace pxfem
