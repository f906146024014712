#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>

#include "afc/mesh.hpp"
#include "m2_reference.hpp"

using afc::build_uniform_mesh;
using afc::Mesh;

TEST_CASE("two-subdivision mesh matches the reference layout") {
    const Mesh mesh = build_uniform_mesh(2);

    REQUIRE(mesh.n_nodes() == m2_reference::n_nodes);
    REQUIRE(mesh.n_triangles() == m2_reference::n_triangles);
    CHECK(mesh.h0 == 0.5);
    CHECK(mesh.h == Catch::Approx(std::sqrt(2.0) * 0.5).epsilon(1e-15));

    for (int i = 0; i < mesh.n_nodes(); ++i) {
        CHECK(mesh.nodes[i][0] == m2_reference::node_xy[i][0]);
        CHECK(mesh.nodes[i][1] == m2_reference::node_xy[i][1]);
    }
    for (int t = 0; t < mesh.n_triangles(); ++t)
        for (int v = 0; v < 3; ++v)
            CHECK(mesh.triangles[t][v] == m2_reference::triangles[t][v]);

    REQUIRE(mesh.interior_ids.size() == 1);
    CHECK(mesh.interior_ids[0] == m2_reference::interior_node);
    CHECK(mesh.boundary_ids.size() == 8);
    CHECK(mesh.node_patch[m2_reference::interior_node].size() == 6);
}

TEST_CASE("node and triangle counts on the M=10 mesh") {
    const Mesh mesh = build_uniform_mesh(10);
    CHECK(mesh.n_nodes() == 121);
    CHECK(mesh.n_triangles() == 200);
    CHECK(mesh.h0 == Catch::Approx(0.1).epsilon(1e-15));
    CHECK(static_cast<int>(mesh.interior_ids.size()) == 81);  // (M-1)^2
}

TEST_CASE("meshes without interior nodes are rejected") {
    CHECK_THROWS_AS(build_uniform_mesh(1), std::invalid_argument);
    CHECK_THROWS_AS(build_uniform_mesh(0), std::invalid_argument);
    CHECK_THROWS_AS(build_uniform_mesh(-3), std::invalid_argument);
}

TEST_CASE("triangles are congruent, positively oriented, and tile the square") {
    for (int m : {2, 3, 8}) {
        const Mesh mesh = build_uniform_mesh(m);
        const double expected_area = mesh.h0 * mesh.h0 / 2.0;
        double total = 0.0;
        for (int t = 0; t < mesh.n_triangles(); ++t) {
            const double a = afc::triangle_area(mesh, t);
            CHECK(a == Catch::Approx(expected_area).epsilon(1e-13));
            CHECK(a > 0.0);
            total += a;
        }
        CHECK(total == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("adjacency structure is symmetric and boundary flags are consistent") {
    for (int m : {2, 5, 8}) {
        const Mesh mesh = build_uniform_mesh(m);
        for (int i = 0; i < mesh.n_nodes(); ++i) {
            for (int j : mesh.node_patch[i]) {
                const auto& back = mesh.node_patch[j];
                CHECK(std::find(back.begin(), back.end(), i) != back.end());
            }
        }
        std::set<int> seen;
        for (int i : mesh.interior_ids) seen.insert(i);
        for (int i : mesh.boundary_ids) {
            CHECK(seen.count(i) == 0);
            seen.insert(i);
        }
        CHECK(static_cast<int>(seen.size()) == mesh.n_nodes());
        for (int i = 0; i < mesh.n_nodes(); ++i) {
            const auto& z = mesh.nodes[i];
            const bool on_edge = z[0] == 0.0 || z[0] == 1.0 || z[1] == 0.0 || z[1] == 1.0;
            CHECK(mesh.is_boundary(i) == on_edge);
        }
    }
}

TEST_CASE("interior node patches are point symmetric about the node") {
    for (int m : {2, 4, 7}) {
        const Mesh mesh = build_uniform_mesh(m);
        for (int i : mesh.interior_ids) {
            CHECK(mesh.node_patch[i].size() == 6);
            for (int j : mesh.node_patch[i]) {
                const double rx = 2.0 * mesh.nodes[i][0] - mesh.nodes[j][0];
                const double ry = 2.0 * mesh.nodes[i][1] - mesh.nodes[j][1];
                bool found = false;
                for (int k : mesh.node_patch[i]) {
                    if (std::abs(mesh.nodes[k][0] - rx) < 1e-12 &&
                        std::abs(mesh.nodes[k][1] - ry) < 1e-12) {
                        found = true;
                        break;
                    }
                }
                CHECK(found);
            }
        }
    }
}

TEST_CASE("quality metrics: congruent right triangles at every resolution") {
    const afc::MeshQuality q2 = afc::mesh_quality(build_uniform_mesh(2));
    const afc::MeshQuality q40 = afc::mesh_quality(build_uniform_mesh(40));

    // Closed form for legs h0, h0: incircle diameter 4*area/perimeter =
    // 2*h0/(2 + sqrt(2)), hypotenuse sqrt(2)*h0, so the ratio is 1 + sqrt(2).
    const double expected_gamma = 1.0 + std::sqrt(2.0);
    CHECK(q2.gamma == Catch::Approx(expected_gamma).epsilon(1e-13));
    CHECK(q40.gamma == Catch::Approx(q2.gamma).epsilon(1e-13));
    CHECK(q2.rho == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(q40.rho == Catch::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("plain-text mesh dump") {
    const Mesh mesh = build_uniform_mesh(2);
    std::ostringstream os;
    afc::write_mesh(mesh, os);
    std::istringstream in(os.str());

    int n_nodes = 0, n_tris = 0;
    in >> n_nodes >> n_tris;
    REQUIRE(n_nodes == 9);
    REQUIRE(n_tris == 8);
    for (int i = 0; i < n_nodes; ++i) {
        double x = -1, y = -1;
        int bnd = -1;
        in >> x >> y >> bnd;
        CHECK(x == mesh.nodes[i][0]);
        CHECK(y == mesh.nodes[i][1]);
        CHECK(bnd == (mesh.is_boundary(i) ? 1 : 0));
    }
    for (int t = 0; t < n_tris; ++t) {
        int a = -1, b = -1, c = -1;
        in >> a >> b >> c;
        CHECK(a == mesh.triangles[t][0]);
        CHECK(b == mesh.triangles[t][1]);
        CHECK(c == mesh.triangles[t][2]);
    }
    REQUIRE(in.good());
}
