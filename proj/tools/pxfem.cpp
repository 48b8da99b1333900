// Command-line front end: convergence studies, single solves on a supplied
// mesh, and the radial exact-solution oracle.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "pxfem/exact_solutions.hpp"
#include "pxfem/study.hpp"

namespace {

using pxfem::RadialCase;

std::string shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// "const:2", "affine:1.5,0.2" (c0 + c1 r), "sin:0.5" (amplitude sin r)
std::function<double(double)> parse_radial_function(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw CLI::ValidationError("radial function must look like name:params, got " + spec);
    }
    const std::string name = spec.substr(0, colon);
    std::vector<double> params;
    std::string rest = spec.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        const auto comma = rest.find(',', pos);
        const std::string token =
            rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            params.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw CLI::ValidationError("bad parameter '" + token + "' in " + spec);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (name == "const" && params.size() == 1) {
        const double c = params[0];
        return [c](double) { return c; };
    }
    if (name == "affine" && params.size() == 2) {
        const double c0 = params[0], c1 = params[1];
        return [c0, c1](double r) { return c0 + c1 * r; };
    }
    if (name == "sin" && params.size() == 1) {
        const double amp = params[0];
        return [amp](double r) { return amp * std::sin(r); };
    }
    throw CLI::ValidationError("unknown radial function " + spec +
                               " (use const:c, affine:c0,c1 or sin:amp)");
}

int run_study_command(const pxfem::StudyConfig& config) {
    const std::vector<pxfem::StudyRecord> records = pxfem::run_study(config);

    std::vector<pxfem::RateFit> fits;
    std::map<double, std::vector<pxfem::StudyRecord>> groups;
    std::vector<double> order;
    for (const auto& rec : records) {
        if (!groups.count(rec.b)) order.push_back(rec.b);
        groups[rec.b].push_back(rec);
    }
    for (double b : order) {
        const auto& group = groups[b];
        const bool fittable =
            group.size() >= 3 &&
            std::all_of(group.begin(), group.end(),
                        [](const pxfem::StudyRecord& r) { return r.ok && r.error > 0.0; });
        if (fittable) {
            fits.push_back(pxfem::fit_rate(group));
        } else {
            std::fprintf(stderr, "note: skipping rate fit for b = %s\n",
                         shortest(b).c_str());
        }
    }

    pxfem::emit(records, fits, config);

    std::printf("%8s %6s %8s %14s %7s %9s\n", "b", "grid", "dof", "error",
                "iters", "seconds");
    bool all_ok = true;
    for (const auto& rec : records) {
        all_ok = all_ok && rec.ok;
        std::printf("%8s %6d %8lld %14.6e %7d %9.3f%s\n", shortest(rec.b).c_str(),
                    rec.grid_side, rec.dof, rec.error, rec.iters, rec.seconds,
                    rec.ok ? "" : "  FAILED");
    }
    for (const auto& fit : fits) {
        std::printf("fit b=%s: alpha=%.6f C=%.6f ssr=%.3e\n",
                    shortest(fit.b).c_str(), fit.alpha, fit.C, fit.ssr);
    }
    std::printf("outputs written to %s\n",
                config.out_dir.empty() ? "." : config.out_dir.c_str());
    return all_ok ? 0 : 1;
}

int run_solve_command(const std::string& mesh_path, double b,
                      const pxfem::DCConfig& dc, int quad_rule,
                      const std::string& dump_path, const std::string& log_path) {
    const pxfem::Mesh mesh = pxfem::read_mesh_text(mesh_path);
    const pxfem::BenchmarkCase bench = pxfem::make_benchmark(b);
    const pxfem::NodalField g = pxfem::interpolate(bench.exact_u, mesh);
    const pxfem::DCResult run =
        pxfem::dc_iterate(bench.f, bench.exponent, g, mesh, dc);

    const double error = pxfem::w1p_error_norm(
        bench.exact_u, bench.exact_grad, run.state.u, bench.exponent, mesh,
        pxfem::triangle_rule(quad_rule));
    std::printf("vertices: %d  cells: %d  h_max: %s\n", mesh.vertex_count(),
                mesh.cell_count(), shortest(mesh.h_max).c_str());
    std::printf("iterations: %d  residual: %.3e  converged: %s\n", run.state.n,
                run.state.residual, run.state.converged ? "yes" : "no");
    std::printf("error: %.8e\n", error);

    if (!dump_path.empty()) {
        pxfem::write_solution(run.state.u, dump_path);
        std::printf("solution written to %s\n", dump_path.c_str());
    }
    if (!log_path.empty()) {
        run.log.write_csv(log_path);
        std::printf("iteration log written to %s\n", log_path.c_str());
    }
    return run.state.converged ? 0 : 1;
}

int run_radial_command(const std::string& P_spec, const std::string& F_spec,
                       double g, int samples) {
    const RadialCase c(parse_radial_function(P_spec), parse_radial_function(F_spec), g);
    std::printf("r,Z,U,U_second\n");
    for (int i = 0; i <= samples; ++i) {
        const double r = static_cast<double>(i) / samples;
        std::printf("%s,%s,%s,%s\n", shortest(r).c_str(),
                    shortest(pxfem::radial_Z(c, r)).c_str(),
                    shortest(pxfem::radial_U(c, r)).c_str(),
                    shortest(pxfem::radial_U_second(c, r)).c_str());
    }
    std::printf("regularity_integral,%s\n",
                shortest(pxfem::regularity_integral(c)).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"P1 finite element solver for the variable-exponent Laplacian "
                 "on triangulated rectangles, with a convergence-study harness"};
    app.require_subcommand(1);

    // study
    pxfem::StudyConfig study_config;
    study_config.b_values = {0.1, 0.5, 1.0};
    study_config.grid_sides = {20, 40, 60, 80, 100, 120, 140};
    study_config.out_dir = "study_out";
    CLI::App* study = app.add_subcommand(
        "study", "run a convergence study over benchmark parameters and grids");
    study->set_config("--config", "", "read options from a key=value file");
    study->add_option("--b", study_config.b_values,
                      "benchmark parameters b (comma separated)")
        ->delimiter(',');
    study->add_option("--grids", study_config.grid_sides,
                      "grid sides N^(1/2), strictly increasing (comma separated)")
        ->delimiter(',');
    study->add_option("--tol", study_config.dc.tol, "splitting residual tolerance");
    study->add_option("--max-iter", study_config.dc.max_iter, "iteration cap");
    study->add_option("--cg-tol", study_config.dc.cg_tol, "linear solver tolerance");
    study->add_option("--scalar-tol", study_config.dc.scalar_tol,
                      "per-cell scalar equation tolerance");
    study->add_option("--rho", study_config.dc.rho, "multiplier step length");
    study->add_option("--quad-degree", study_config.quad_rule,
                      "quadrature rule: 5 (7-point) or 12 (12-point)")
        ->check(CLI::IsMember({5, 12}));
    study->add_option("--out", study_config.out_dir, "output directory");
    study->add_flag("--plot", study_config.plot, "write a log-log SVG plot");
    study->add_flag("--dump-solutions", study_config.dump_solutions,
                    "write solution coefficients per study cell");
    study->add_option("--seed", study_config.seed,
                      "seed recorded for randomized suites (studies are deterministic)");

    // solve
    std::string mesh_path, dump_path, log_path;
    double solve_b = 0.5;
    pxfem::DCConfig solve_dc;
    int solve_quad = 5;
    CLI::App* solve = app.add_subcommand(
        "solve", "solve one benchmark problem on a mesh loaded from a file");
    solve->add_option("--mesh", mesh_path, "mesh file (plain text format)")
        ->required();
    solve->add_option("--b", solve_b, "benchmark parameter")->required();
    solve->add_option("--tol", solve_dc.tol, "splitting residual tolerance");
    solve->add_option("--max-iter", solve_dc.max_iter, "iteration cap");
    solve->add_option("--cg-tol", solve_dc.cg_tol, "linear solver tolerance");
    solve->add_option("--rho", solve_dc.rho, "multiplier step length");
    solve->add_option("--quad-degree", solve_quad,
                      "quadrature rule: 5 (7-point) or 12 (12-point)")
        ->check(CLI::IsMember({5, 12}));
    solve->add_option("--dump-solution", dump_path, "write solution coefficients here");
    solve->add_option("--iter-log", log_path, "write the iteration log CSV here");

    // radial
    std::string P_spec = "const:1.5", F_spec = "const:-1";
    double radial_g = 0.0;
    int radial_samples = 10;
    CLI::App* radial = app.add_subcommand(
        "radial", "print the radially symmetric exact-solution oracle as CSV");
    radial->add_option("--P", P_spec, "exponent profile (const:c, affine:c0,c1, sin:amp)");
    radial->add_option("--F", F_spec, "source profile (const:c, affine:c0,c1, sin:amp)");
    radial->add_option("--g", radial_g, "boundary value");
    radial->add_option("--samples", radial_samples, "number of radius samples")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (study->parsed()) return run_study_command(study_config);
        if (solve->parsed()) {
            return run_solve_command(mesh_path, solve_b, solve_dc, solve_quad,
                                     dump_path, log_path);
        }
        return run_radial_command(P_spec, F_spec, radial_g, radial_samples);
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
}
