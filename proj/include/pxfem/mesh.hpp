#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pxfem/vec2.hpp"

namespace pxfem {

/// Conforming triangulation of a polygonal domain.
///
/// Triangles are positively oriented index triples into `vertices`. Any two
/// distinct closed triangles intersect in nothing, a common vertex, or a
/// common full edge. `boundary_vertex[v]` is 1 iff v lies on the boundary
/// polygon of the triangulated region. Per-cell geometry (area, barycenter,
/// gradients of the three P1 hat functions) is cached at construction and
/// the mesh is immutable afterwards, so it can be shared across threads.
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::uint8_t> boundary_vertex;
    double h_max = 0.0;  // maximum edge length over all triangles

    // cached per-cell geometry
    std::vector<double> areas;
    std::vector<std::array<Vec2, 3>> basis_gradients;
    std::vector<Vec2> barycenters;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int cell_count() const { return static_cast<int>(triangles.size()); }

    /// Physical location of a barycentric point inside a cell.
    Vec2 cell_point(int cell, const std::array<double, 3>& bary) const {
        const auto& t = triangles[cell];
        return bary[0] * vertices[t[0]] + bary[1] * vertices[t[1]] +
               bary[2] * vertices[t[2]];
    }
};

/// Builds a mesh from raw vertex/triangle data: validates positive
/// orientation and edge conformity, derives boundary flags from edge
/// incidence, and caches cell geometry. Throws std::invalid_argument on
/// degenerate or non-conforming input.
Mesh make_mesh(std::vector<Vec2> vertices,
               std::vector<std::array<int, 3>> triangles);

/// Uniform triangulation of an axis-aligned rectangle: (m+1)^2 vertices in
/// row-major order (x2 outer, x1 inner), each grid square split by its
/// lower-left-to-upper-right diagonal. h_max is the square diagonal.
Mesh build_uniform_rect_mesh(Interval x_range, Interval y_range, int m);

/// Continuous piecewise-linear scalar field: one coefficient per vertex,
/// equal to the field value at that vertex.
struct NodalField {
    const Mesh* mesh = nullptr;
    std::vector<double> values;
};

NodalField make_nodal_field(const Mesh& mesh);

/// Piecewise-constant 2-vector field: one value per triangle.
struct CellVectorField {
    const Mesh* mesh = nullptr;
    std::vector<Vec2> values;
};

CellVectorField make_cell_vector_field(const Mesh& mesh);

/// Constant gradient of the linear interpolant on one triangle.
Vec2 gradient_on_cell(const NodalField& field, int cell);

/// Gradients of `field` on every cell.
CellVectorField cell_gradients(const NodalField& field);

/// Value of the field at a barycentric point of a cell.
double value_on_cell(const NodalField& field, int cell,
                     const std::array<double, 3>& bary);

/// Nodal interpolation: coefficients equal v at every vertex.
NodalField interpolate(const std::function<double(Vec2)>& v, const Mesh& mesh);

/// Indices of all boundary-flagged vertices, ascending.
std::vector<int> boundary_vertices(const Mesh& mesh);

/// Plain-text mesh format: line 1 "nv nt", then nv lines "x y flag", then
/// nt lines "i j k" (0-based). Floats are written with 17 significant
/// digits so coordinates round-trip exactly.
void write_mesh_text(const Mesh& mesh, std::ostream& out);
void write_mesh_text(const Mesh& mesh, const std::string& path);
Mesh read_mesh_text(std::istream& in);
Mesh read_mesh_text(const std::string& path);

}  // namespace pxfem
