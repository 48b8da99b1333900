#include "pxfem/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace pxfem {

namespace {

void cache_cell_geometry(Mesh& mesh) {
    const int nt = mesh.cell_count();
    mesh.areas.resize(nt);
    mesh.basis_gradients.resize(nt);
    mesh.barycenters.resize(nt);
    mesh.h_max = 0.0;
    for (int c = 0; c < nt; ++c) {
        const auto& t = mesh.triangles[c];
        const Vec2 p0 = mesh.vertices[t[0]];
        const Vec2 p1 = mesh.vertices[t[1]];
        const Vec2 p2 = mesh.vertices[t[2]];
        const double area2 = cross(p1 - p0, p2 - p0);
        if (!(area2 > 0.0)) {
            throw std::invalid_argument(
                "mesh: triangle " + std::to_string(c) +
                " is degenerate or negatively oriented");
        }
        mesh.areas[c] = 0.5 * area2;
        // grad of the hat at local vertex i is the rotated opposite edge
        // over twice the area.
        mesh.basis_gradients[c] = {perp(p2 - p1) / area2, perp(p0 - p2) / area2,
                                   perp(p1 - p0) / area2};
        mesh.barycenters[c] = (p0 + p1 + p2) / 3.0;
        mesh.h_max = std::max({mesh.h_max, norm(p1 - p0), norm(p2 - p1),
                               norm(p0 - p2)});
    }
}

// Edge incidence: every undirected edge must belong to one triangle
// (boundary) or two (interior, traversed once in each direction).
// Returns boundary flags per vertex.
std::vector<std::uint8_t> derive_boundary_flags(
    const std::vector<Vec2>& vertices,
    const std::vector<std::array<int, 3>>& triangles) {
    std::map<std::pair<int, int>, std::pair<int, int>> edges;  // (min,max) -> (count, forward count)
    for (const auto& t : triangles) {
        for (int e = 0; e < 3; ++e) {
            const int a = t[e];
            const int b = t[(e + 1) % 3];
            auto key = std::minmax(a, b);
            auto& rec = edges[{key.first, key.second}];
            rec.first += 1;
            if (a < b) rec.second += 1;
        }
    }
    std::vector<std::uint8_t> flags(vertices.size(), 0);
    for (const auto& [key, rec] : edges) {
        if (rec.first > 2) {
            throw std::invalid_argument("mesh: edge shared by more than two triangles");
        }
        if (rec.first == 2 && rec.second != 1) {
            throw std::invalid_argument("mesh: interior edge traversed twice in the same direction");
        }
        if (rec.first == 1) {
            flags[key.first] = 1;
            flags[key.second] = 1;
        }
    }
    return flags;
}

void format_double(std::ostream& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v,
                             std::chars_format::general, 17);
    out.write(buf, res.ptr - buf);
}

}  // namespace

Mesh make_mesh(std::vector<Vec2> vertices,
               std::vector<std::array<int, 3>> triangles) {
    const int nv = static_cast<int>(vertices.size());
    if (nv < 3 || triangles.empty()) {
        throw std::invalid_argument("mesh: need at least 3 vertices and 1 triangle");
    }
    for (const Vec2& v : vertices) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
            throw std::invalid_argument("mesh: non-finite vertex coordinate");
        }
    }
    for (const auto& t : triangles) {
        for (int i : t) {
            if (i < 0 || i >= nv) throw std::invalid_argument("mesh: vertex index out of range");
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
            throw std::invalid_argument("mesh: repeated vertex in triangle");
        }
    }
    Mesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.triangles = std::move(triangles);
    mesh.boundary_vertex = derive_boundary_flags(mesh.vertices, mesh.triangles);
    cache_cell_geometry(mesh);
    return mesh;
}

Mesh build_uniform_rect_mesh(Interval x_range, Interval y_range, int m) {
    if (m < 1) {
        throw std::invalid_argument("build_uniform_rect_mesh: m must be >= 1");
    }
    if (!(x_range.length() > 0.0) || !(y_range.length() > 0.0)) {
        throw std::invalid_argument("build_uniform_rect_mesh: degenerate interval");
    }
    const int n = m + 1;
    std::vector<Vec2> vertices;
    vertices.reserve(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        const double y = y_range.lo + y_range.length() * j / m;
        for (int i = 0; i < n; ++i) {
            const double x = x_range.lo + x_range.length() * i / m;
            vertices.push_back({x, y});
        }
    }
    std::vector<std::array<int, 3>> triangles;
    triangles.reserve(2u * m * m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            const int ll = j * n + i;
            const int lr = ll + 1;
            const int ul = ll + n;
            const int ur = ul + 1;
            triangles.push_back({ll, lr, ur});
            triangles.push_back({ll, ur, ul});
        }
    }
    return make_mesh(std::move(vertices), std::move(triangles));
}

NodalField make_nodal_field(const Mesh& mesh) {
    return {&mesh, std::vector<double>(mesh.vertex_count(), 0.0)};
}

CellVectorField make_cell_vector_field(const Mesh& mesh) {
    return {&mesh, std::vector<Vec2>(mesh.cell_count())};
}

Vec2 gradient_on_cell(const NodalField& field, int cell) {
    const Mesh& mesh = *field.mesh;
    if (cell < 0 || cell >= mesh.cell_count()) {
        throw std::out_of_range("gradient_on_cell: cell index out of range");
    }
    const auto& t = mesh.triangles[cell];
    const auto& g = mesh.basis_gradients[cell];
    return field.values[t[0]] * g[0] + field.values[t[1]] * g[1] +
           field.values[t[2]] * g[2];
}

CellVectorField cell_gradients(const NodalField& field) {
    const Mesh& mesh = *field.mesh;
    CellVectorField out = make_cell_vector_field(mesh);
    for (int c = 0; c < mesh.cell_count(); ++c) {
        out.values[c] = gradient_on_cell(field, c);
    }
    return out;
}

double value_on_cell(const NodalField& field, int cell,
                     const std::array<double, 3>& bary) {
    const auto& t = field.mesh->triangles[cell];
    return bary[0] * field.values[t[0]] + bary[1] * field.values[t[1]] +
           bary[2] * field.values[t[2]];
}

NodalField interpolate(const std::function<double(Vec2)>& v, const Mesh& mesh) {
    NodalField field = make_nodal_field(mesh);
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        field.values[i] = v(mesh.vertices[i]);
    }
    return field;
}

std::vector<int> boundary_vertices(const Mesh& mesh) {
    std::vector<int> out;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        if (mesh.boundary_vertex[i]) out.push_back(i);
    }
    return out;
}

void write_mesh_text(const Mesh& mesh, std::ostream& out) {
    out << mesh.vertex_count() << ' ' << mesh.cell_count() << '\n';
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        format_double(out, mesh.vertices[i].x);
        out << ' ';
        format_double(out, mesh.vertices[i].y);
        out << ' ' << int(mesh.boundary_vertex[i]) << '\n';
    }
    for (const auto& t : mesh.triangles) {
        out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
}

void write_mesh_text(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_mesh_text(mesh, out);
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

Mesh read_mesh_text(std::istream& in) {
    int nv = 0, nt = 0;
    if (!(in >> nv >> nt) || nv < 3 || nt < 1) {
        throw std::invalid_argument("mesh file: bad header");
    }
    std::vector<Vec2> vertices(nv);
    std::vector<std::uint8_t> flags(nv);
    for (int i = 0; i < nv; ++i) {
        int f = 0;
        if (!(in >> vertices[i].x >> vertices[i].y >> f) || (f != 0 && f != 1)) {
            throw std::invalid_argument("mesh file: bad vertex line " + std::to_string(i));
        }
        flags[i] = static_cast<std::uint8_t>(f);
    }
    std::vector<std::array<int, 3>> triangles(nt);
    for (int c = 0; c < nt; ++c) {
        if (!(in >> triangles[c][0] >> triangles[c][1] >> triangles[c][2])) {
            throw std::invalid_argument("mesh file: bad triangle line " + std::to_string(c));
        }
    }
    Mesh mesh = make_mesh(std::move(vertices), std::move(triangles));
    if (mesh.boundary_vertex != flags) {
        throw std::invalid_argument(
            "mesh file: boundary flags disagree with edge incidence");
    }
    return mesh;
}

Mesh read_mesh_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mesh file: " + path);
    return read_mesh_text(in);
}

}  // namespace pxfem
