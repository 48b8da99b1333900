#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <functional>
#include <random>

#include "pxfem/linear_system.hpp"
#include "pxfem/mesh.hpp"
#include "pxfem/quadrature.hpp"

using namespace pxfem;

namespace {

const QuadratureRule& rule5() { return triangle_rule(5); }

std::function<double(Vec2)> zero_fn() {
    return [](Vec2) { return 0.0; };
}

}  // namespace

TEST_CASE("stiffness of the two-triangle unit square") {
    const Mesh mesh = build_uniform_rect_mesh({0.0, 1.0}, {0.0, 1.0}, 1);
    const SparseSymmetricMatrix M = assemble_stiffness(mesh);
    // vertices 1 = (1,0) and 2 = (0,1) each belong to a single right
    // triangle with unit legs; the diagonal entry there is 1.
    CHECK(M.value(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(M.value(2, 2) == doctest::Approx(1.0).epsilon(1e-14));
    // diagonal corners sit on both triangles
    CHECK(M.value(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(M.value(3, 3) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("constants lie in the stiffness kernel and symmetry is exact") {
    const Mesh mesh = build_uniform_rect_mesh({-1.0, 1.0}, {0.0, 3.0}, 6);
    const SparseSymmetricMatrix M = assemble_stiffness(mesh);
    std::vector<double> ones(M.dim(), 1.0), out;
    M.multiply(ones, out);
    for (double v : out) CHECK(std::abs(v) <= 1e-12);

    for (int i = 0; i < M.dim(); ++i) {
        for (int k = M.row_ptr()[i]; k < M.row_ptr()[i + 1]; ++k) {
            const int j = M.col_idx()[k];
            CHECK(M.values()[k] == M.value(j, i));
        }
    }
}

TEST_CASE("load assembly matches a dense reference loop") {
    const Mesh mesh = build_uniform_rect_mesh({-1.0, 1.0}, {-1.0, 1.0}, 4);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> comp(-2.0, 2.0);
    CellVectorField eta = make_cell_vector_field(mesh);
    for (auto& v : eta.values) v = {comp(rng), comp(rng)};
    const CellVectorField lambda = make_cell_vector_field(mesh);
    const auto f = [](Vec2 x) { return std::sin(x.x) + x.y; };

    const std::vector<double> rhs = assemble_rhs(f, eta, lambda, mesh, rule5());

    // reference: loop vertices, then all cells touching each vertex
    for (int j = 0; j < mesh.vertex_count(); ++j) {
        double expected = 0.0;
        for (int c = 0; c < mesh.cell_count(); ++c) {
            const auto& t = mesh.triangles[c];
            for (int a = 0; a < 3; ++a) {
                if (t[a] != j) continue;
                expected += mesh.areas[c] * dot(eta.values[c], mesh.basis_gradients[c][a]);
                for (int q = 0; q < rule5().size(); ++q) {
                    expected += mesh.areas[c] * rule5().weights[q] *
                                f(mesh.cell_point(c, rule5().points[q])) *
                                rule5().points[q][a];
                }
            }
        }
        CHECK(rhs[j] == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("load vector vanishes when the cell fields cancel") {
    const Mesh mesh = build_uniform_rect_mesh({-1.0, 1.0}, {-1.0, 1.0}, 3);
    CellVectorField eta = make_cell_vector_field(mesh);
    for (auto& v : eta.values) v = {0.7, -0.3};
    const std::vector<double> rhs = assemble_rhs(zero_fn(), eta, eta, mesh, rule5());
    for (double v : rhs) CHECK(v == 0.0);
}

TEST_CASE("unit source produces a third of each hat support area") {
    const Mesh mesh = build_uniform_rect_mesh({-1.0, 1.0}, {-1.0, 1.0}, 4);
    const CellVectorField zero = make_cell_vector_field(mesh);
    const std::vector<double> rhs =
        assemble_rhs([](Vec2) { return 1.0; }, zero, zero, mesh, rule5());
    for (int j = 0; j < mesh.vertex_count(); ++j) {
        double support = 0.0;
        for (int c = 0; c < mesh.cell_count(); ++c) {
            const auto& t = mesh.triangles[c];
            if (t[0] == j || t[1] == j || t[2] == j) support += mesh.areas[c];
        }
        CHECK(rhs[j] == doctest::Approx(support / 3.0).epsilon(1e-13));
    }
}

TEST_CASE("affine boundary data is solved exactly") {
    const Mesh mesh = build_uniform_rect_mesh({-1.0, 1.0}, {-1.0, 1.0}, 8);
    const SparseSymmetricMatrix M = assemble_stiffness(mesh);
    const CellVectorField zero = make_cell_vector_field(mesh);
    const std::vector<double> rhs = assemble_rhs(zero_fn(), zero, zero, mesh, rule5());
    const NodalField g = interpolate([](Vec2 x) { return x.x; }, mesh);
    const std::vector<double> u =
        solve_dirichlet(M, rhs, mesh.boundary_vertex, g.values, 1e-12);
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        CHECK(u[i] == doctest::Approx(mesh.vertices[i].x).epsilon(1e-10));
    }
}

TEST_CASE("constant boundary data yields the constant solution") {
    const Mesh mesh = build_uniform_rect_mesh({0.0, 1.0}, {0.0, 2.0}, 5);
    const SparseSymmetricMatrix M = assemble_stiffness(mesh);
    const CellVectorField zero = make_cell_vector_field(mesh);
    const std::vector<double> rhs = assemble_rhs(zero_fn(), zero, zero, mesh, rule5());
    const std::vector<double> g(mesh.vertex_count(), 4.5);
    const std::vector<double> u =
        solve_dirichlet(M, rhs, mesh.boundary_vertex, g, 1e-12);
    for (double v : u) CHECK(v == doctest::Approx(4.5).epsilon(1e-11));
}

TEST_CASE("harmonic product solution is captured to solver tolerance") {
    const Mesh mesh = build_uniform_rect_mesh({-1.0, 1.0}, {-1.0, 1.0}, 4);
    const SparseSymmetricMatrix M = assemble_stiffness(mesh);
    const CellVectorField zero = make_cell_vector_field(mesh);
    const std::vector<double> rhs = assemble_rhs(zero_fn(), zero, zero, mesh, rule5());
    const NodalField g = interpolate([](Vec2 x) { return x.x * x.y; }, mesh);
    const std::vector<double> u =
        solve_dirichlet(M, rhs, mesh.boundary_vertex, g.values, 1e-12);
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        CHECK(u[i] == doctest::Approx(mesh.vertices[i].x * mesh.vertices[i].y)
                          .epsilon(1e-10));
    }
}

TEST_CASE("solver satisfies discrete orthogonality on the free vertices") {
    const Mesh mesh = build_uniform_rect_mesh({-1.0, 1.0}, {-1.0, 1.0}, 6);
    const SparseSymmetricMatrix M = assemble_stiffness(mesh);
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> comp(-1.0, 1.0);
    CellVectorField eta = make_cell_vector_field(mesh);
    for (auto& v : eta.values) v = {comp(rng), comp(rng)};
    const CellVectorField lam = make_cell_vector_field(mesh);
    const std::vector<double> rhs = assemble_rhs(zero_fn(), eta, lam, mesh, rule5());
    const std::vector<double> g(mesh.vertex_count(), 0.0);

    const double tol = 1e-11;
    const std::vector<double> u =
        solve_dirichlet(M, rhs, mesh.boundary_vertex, g, tol);
    std::vector<double> Mu;
    M.multiply(u, Mu);
    double rhs_norm = 0.0;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        if (!mesh.boundary_vertex[i]) rhs_norm += rhs[i] * rhs[i];
    }
    rhs_norm = std::sqrt(rhs_norm);
    // each basis defect is bounded by the free-part residual norm
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        if (!mesh.boundary_vertex[i]) {
            CHECK(std::abs(Mu[i] - rhs[i]) <= tol * rhs_norm);
        }
    }
}

TEST_CASE("cg residual history decreases monotonically on the model problem") {
    const Mesh mesh = build_uniform_rect_mesh({-1.0, 1.0}, {-1.0, 1.0}, 12);
    const SparseSymmetricMatrix M = assemble_stiffness(mesh);
    const LinearSystemWorkspace ws(M, mesh.boundary_vertex);
    const CellVectorField zero = make_cell_vector_field(mesh);
    const std::vector<double> rhs =
        assemble_rhs([](Vec2 x) { return std::cos(3.0 * x.x) * x.y; }, zero, zero,
                     mesh, rule5());
    const std::vector<double> g(mesh.vertex_count(), 0.0);
    std::vector<double> history;
    ws.solve(rhs, g, 1e-12, nullptr, &history);
    REQUIRE(history.size() >= 3);
    for (std::size_t i = 1; i < history.size(); ++i) {
        CHECK(history[i] <= history[i - 1] * (1.0 + 1e-12));
    }
}

TEST_CASE("iteration cap raises a convergence error carrying the residual") {
    const Mesh mesh = build_uniform_rect_mesh({-1.0, 1.0}, {-1.0, 1.0}, 10);
    const SparseSymmetricMatrix M = assemble_stiffness(mesh);
    const LinearSystemWorkspace ws(M, mesh.boundary_vertex);
    const CellVectorField zero = make_cell_vector_field(mesh);
    const std::vector<double> rhs =
        assemble_rhs([](Vec2) { return 1.0; }, zero, zero, mesh, rule5());
    const std::vector<double> g(mesh.vertex_count(), 0.0);
    try {
        ws.solve(rhs, g, 1e-14, nullptr, nullptr, 2);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& err) {
        CHECK(err.residual() > 0.0);
        CHECK(err.iterations() == 2);
    }
}

TEST_CASE("warm starts shorten the residual history") {
    const Mesh mesh = build_uniform_rect_mesh({-1.0, 1.0}, {-1.0, 1.0}, 10);
    const SparseSymmetricMatrix M = assemble_stiffness(mesh);
    const LinearSystemWorkspace ws(M, mesh.boundary_vertex);
    const CellVectorField zero = make_cell_vector_field(mesh);
    const std::vector<double> rhs =
        assemble_rhs([](Vec2 x) { return x.x + 2.0; }, zero, zero, mesh, rule5());
    const std::vector<double> g(mesh.vertex_count(), 0.0);
    std::vector<double> cold_history;
    const std::vector<double> u = ws.solve(rhs, g, 1e-10, nullptr, &cold_history);
    std::vector<double> warm_history;
    ws.solve(rhs, g, 1e-10, &u, &warm_history);
    CHECK(warm_history.size() <= 2);
    CHECK(warm_history.size() < cold_history.size());
}
