#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>
#include <vector>

namespace afc {

/// Uniform right-triangle triangulation of the unit square.
///
/// Nodes live on an (m+1) x (m+1) grid, numbered lexicographically by
/// (row, column): node index = q*(m+1) + p at coordinates (p/m, q/m).
/// Every cell is split along its lower-left -> upper-right diagonal, so all
/// interior node patches are congruent and point-symmetric about the node.
struct Mesh {
    int m = 0;        // subdivisions per side
    double h0 = 0.0;  // grid step 1/m
    double h = 0.0;   // max triangle diameter, sqrt(2)*h0

    std::vector<std::array<double, 2>> nodes;
    std::vector<std::array<int, 3>> triangles;  // CCW vertex indices
    std::vector<std::uint8_t> boundary;         // 1 if node lies on the boundary
    std::vector<int> interior_ids;
    std::vector<int> boundary_ids;
    std::vector<std::vector<int>> node_patch;   // sorted edge-adjacent node ids

    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }
    bool is_boundary(int i) const { return boundary[static_cast<std::size_t>(i)] != 0; }
};

inline double triangle_area(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    const auto& a = mesh.nodes[static_cast<std::size_t>(tri[0])];
    const auto& b = mesh.nodes[static_cast<std::size_t>(tri[1])];
    const auto& c = mesh.nodes[static_cast<std::size_t>(tri[2])];
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

/// Builds the uniform mesh with m subdivisions per side (m >= 2).
inline Mesh build_uniform_mesh(int m) {
    if (m < 2)
        throw std::invalid_argument("build_uniform_mesh: m must be >= 2 (no interior node otherwise)");

    Mesh mesh;
    mesh.m = m;
    mesh.h0 = 1.0 / m;
    mesh.h = std::sqrt(2.0) * mesh.h0;

    const int np = m + 1;
    mesh.nodes.reserve(static_cast<std::size_t>(np) * np);
    mesh.boundary.reserve(static_cast<std::size_t>(np) * np);
    for (int q = 0; q < np; ++q) {
        for (int p = 0; p < np; ++p) {
            mesh.nodes.push_back({static_cast<double>(p) / m, static_cast<double>(q) / m});
            const bool bnd = (p == 0 || p == m || q == 0 || q == m);
            mesh.boundary.push_back(bnd ? 1 : 0);
            const int id = q * np + p;
            (bnd ? mesh.boundary_ids : mesh.interior_ids).push_back(id);
        }
    }

    mesh.triangles.reserve(2u * static_cast<std::size_t>(m) * m);
    for (int q = 0; q < m; ++q) {
        for (int p = 0; p < m; ++p) {
            const int a = q * np + p;       // lower-left
            const int b = a + 1;            // lower-right
            const int c = a + np + 1;       // upper-right
            const int d = a + np;           // upper-left
            mesh.triangles.push_back({a, b, c});
            mesh.triangles.push_back({a, c, d});
        }
    }

    std::vector<std::set<int>> patch(mesh.nodes.size());
    for (const auto& tri : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            const int i = tri[static_cast<std::size_t>(e)];
            const int j = tri[static_cast<std::size_t>((e + 1) % 3)];
            patch[static_cast<std::size_t>(i)].insert(j);
            patch[static_cast<std::size_t>(j)].insert(i);
        }
    }
    mesh.node_patch.resize(mesh.nodes.size());
    for (std::size_t i = 0; i < patch.size(); ++i)
        mesh.node_patch[i].assign(patch[i].begin(), patch[i].end());

    return mesh;
}

struct MeshQuality {
    double gamma;  // max over triangles of diameter / inscribed-circle diameter
    double rho;    // max diameter / min diameter
};

inline MeshQuality mesh_quality(const Mesh& mesh) {
    double gamma = 0.0, hmax = 0.0, hmin = std::numeric_limits<double>::max();
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        double edge[3];
        for (int e = 0; e < 3; ++e) {
            const auto& a = mesh.nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>(e)])];
            const auto& b = mesh.nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>((e + 1) % 3)])];
            edge[e] = std::hypot(b[0] - a[0], b[1] - a[1]);
        }
        const double hk = std::max({edge[0], edge[1], edge[2]});
        const double perimeter = edge[0] + edge[1] + edge[2];
        const double incircle_diam = 4.0 * triangle_area(mesh, t) / perimeter;
        gamma = std::max(gamma, hk / incircle_diam);
        hmax = std::max(hmax, hk);
        hmin = std::min(hmin, hk);
    }
    return {gamma, hmax / hmin};
}

/// Plain-text dump: "N_nodes N_triangles", nodes as "x y is_boundary",
/// triangles as "i j k" (0-based), coordinates with 17 significant digits.
inline void write_mesh(const Mesh& mesh, std::ostream& os) {
    os << mesh.n_nodes() << ' ' << mesh.n_triangles() << '\n';
    char buf[64];
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        const auto& z = mesh.nodes[static_cast<std::size_t>(i)];
        std::snprintf(buf, sizeof buf, "%.17g %.17g %d", z[0], z[1], mesh.is_boundary(i) ? 1 : 0);
        os << buf << '\n';
    }
    for (const auto& tri : mesh.triangles)
        os << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
}

}  // namespace afc
