#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "afc/fem.hpp"
#include "afc/problems.hpp"
#include "m2_reference.hpp"

namespace {

// Applies a quadrature rule to an arbitrary integrand over the whole mesh.
double quad_integrate(const afc::Mesh& mesh, const afc::QuadratureRule& rule,
                      const std::function<double(double, double)>& f) {
    double total = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double area = afc::triangle_area(mesh, t);
        for (const auto& qp : rule.points) {
            double x = 0.0, y = 0.0;
            for (int v = 0; v < 3; ++v) {
                x += qp.bary[v] * mesh.nodes[tri[v]][0];
                y += qp.bary[v] * mesh.nodes[tri[v]][1];
            }
            total += qp.weight * area * f(x, y);
        }
    }
    return total;
}

std::vector<double> random_field(const afc::Mesh& mesh, std::mt19937& rng, bool zero_boundary) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(mesh.n_nodes());
    for (int i = 0; i < mesh.n_nodes(); ++i)
        v[i] = (zero_boundary && mesh.is_boundary(i)) ? 0.0 : dist(rng);
    return v;
}

}  // namespace

TEST_CASE("mass matrix matches the hand-integrated two-subdivision reference") {
    const afc::Mesh mesh = afc::build_uniform_mesh(2);
    const auto pat = afc::make_pattern(mesh);
    const afc::SparseMatrix mass = afc::assemble_mass(mesh, pat);

    for (int i = 0; i < mesh.n_nodes(); ++i)
        for (int j = 0; j < mesh.n_nodes(); ++j)
            CHECK(mass.get(i, j) == Catch::Approx(m2_reference::mass[i][j]).margin(1e-14));

    // Interior diagonal is h0^2/2 exactly.
    CHECK(mass.get(4, 4) == Catch::Approx(0.125).margin(1e-16));
}

TEST_CASE("mass matrix is symmetric, nonnegative, and sums to the domain area") {
    const afc::Mesh mesh = afc::build_uniform_mesh(7);
    const auto pat = afc::make_pattern(mesh);
    const afc::SparseMatrix mass = afc::assemble_mass(mesh, pat);

    double total = 0.0;
    for (const auto& e : pat->edges)
        CHECK(mass.values[e.pij] == Catch::Approx(mass.values[e.pji]).margin(1e-16));
    for (double v : mass.values) {
        CHECK(v >= 0.0);
        total += v;
    }
    CHECK(total == Catch::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("lumped mass equals the row sums and matches the reference") {
    const afc::Mesh mesh = afc::build_uniform_mesh(2);
    const auto pat = afc::make_pattern(mesh);
    const afc::SparseMatrix mass = afc::assemble_mass(mesh, pat);
    const std::vector<double> lumped = afc::lump_mass(mass);

    double total = 0.0;
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        CHECK(lumped[i] == Catch::Approx(m2_reference::lumped[i]).margin(1e-15));
        CHECK(lumped[i] > 0.0);
        total += lumped[i];
    }
    CHECK(total == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(lumped[4] == Catch::Approx(0.25).margin(1e-16));

    // Row sums on a bigger mesh, checked against the matrix itself.
    const afc::Mesh mesh8 = afc::build_uniform_mesh(8);
    const auto pat8 = afc::make_pattern(mesh8);
    const afc::SparseMatrix mass8 = afc::assemble_mass(mesh8, pat8);
    const std::vector<double> lumped8 = afc::lump_mass(mass8);
    for (int i = 0; i < mesh8.n_nodes(); ++i) {
        double row = 0.0;
        for (int p = pat8->row_ptr[i]; p < pat8->row_ptr[i + 1]; ++p) row += mass8.values[p];
        CHECK(row == Catch::Approx(lumped8[i]).epsilon(1e-14));
    }
}

TEST_CASE("lumped inner product agrees with the element-loop vertex quadrature") {
    const afc::Mesh mesh = afc::build_uniform_mesh(3);
    const auto pat = afc::make_pattern(mesh);
    const std::vector<double> lumped = afc::lump_mass(afc::assemble_mass(mesh, pat));

    std::mt19937 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<double> psi = random_field(mesh, rng, false);
        const std::vector<double> chi = random_field(mesh, rng, false);

        // Oracle: accumulate |K|/3 * psi_v * chi_v per triangle vertex.
        double oracle = 0.0;
        for (int t = 0; t < mesh.n_triangles(); ++t) {
            const double third = afc::triangle_area(mesh, t) / 3.0;
            for (int v = 0; v < 3; ++v) {
                const int node = mesh.triangles[t][v];
                oracle += third * psi[node] * chi[node];
            }
        }
        CHECK(afc::lumped_inner_product(lumped, psi, chi) ==
              Catch::Approx(oracle).margin(1e-13));
    }

    CHECK(afc::lumped_inner_product(lumped, std::vector<double>(mesh.n_nodes(), 0.0),
                                    std::vector<double>(mesh.n_nodes(), 0.0)) == 0.0);

    // Indicator of a single node picks out its lumped mass.
    std::vector<double> indicator(mesh.n_nodes(), 0.0);
    indicator[5] = 1.0;
    CHECK(afc::lumped_inner_product(lumped, indicator, indicator) ==
          Catch::Approx(lumped[5]).margin(1e-16));
}

TEST_CASE("quadrature rules integrate monomials to their declared degree") {
    const afc::Mesh mesh = afc::build_uniform_mesh(3);
    const auto exact = [](int a, int b) { return 1.0 / ((a + 1.0) * (b + 1.0)); };
    const auto monomial = [](int a, int b) {
        return [a, b](double x, double y) { return std::pow(x, a) * std::pow(y, b); };
    };

    for (const auto* rule : {&afc::vertex_rule(), &afc::midpoint_rule(), &afc::degree4_rule()}) {
        double weight_sum = 0.0;
        for (const auto& qp : rule->points) {
            weight_sum += qp.weight;
            CHECK(qp.bary[0] + qp.bary[1] + qp.bary[2] == Catch::Approx(1.0).margin(1e-14));
            for (double b : qp.bary) CHECK(b >= 0.0);
        }
        CHECK(weight_sum == Catch::Approx(1.0).margin(1e-14));

        for (int a = 0; a <= rule->degree; ++a) {
            for (int b = 0; a + b <= rule->degree; ++b) {
                CHECK(quad_integrate(mesh, *rule, monomial(a, b)) ==
                      Catch::Approx(exact(a, b)).margin(1e-13));
            }
        }
    }

    // Sanity that the exactness check bites. Degree 5 gains a free pass from
    // the central symmetry of the mesh, so probe an even degree-6 monomial.
    const double inexact = quad_integrate(mesh, afc::degree4_rule(), monomial(6, 0));
    CHECK(std::abs(inexact - exact(6, 0)) > 1e-12);
}

TEST_CASE("transport matrix matches the two-subdivision reference") {
    const afc::Mesh mesh = afc::build_uniform_mesh(2);
    const auto pat = afc::make_pattern(mesh);
    const afc::FluxField flux = afc::make_constant_flux("unit-x", 1.0, 0.0, 0);
    const afc::SparseMatrix transport = afc::assemble_convection(mesh, pat, flux, {}, 0.0);

    for (int i = 0; i < mesh.n_nodes(); ++i)
        for (int j = 0; j < mesh.n_nodes(); ++j)
            CHECK(transport.get(i, j) ==
                  Catch::Approx(m2_reference::transport[i][j]).margin(1e-14));
}

TEST_CASE("transport assembly edge cases") {
    const afc::Mesh mesh = afc::build_uniform_mesh(4);
    const auto pat = afc::make_pattern(mesh);

    SECTION("zero velocity gives the zero matrix") {
        const afc::FluxField flux = afc::make_constant_flux("zero", 0.0, 0.0, 0);
        const afc::SparseMatrix transport = afc::assemble_convection(mesh, pat, flux, {}, 0.0);
        for (double v : transport.values) CHECK(v == 0.0);
    }

    SECTION("quadratic flux with constant state factors through the linear matrix") {
        const double c = 0.37;
        const std::vector<double> psi(mesh.n_nodes(), c);
        const afc::FluxField lin = afc::make_constant_flux("lin", 0.5, 0.5, 0);
        const afc::FluxField quad = afc::make_constant_flux("quad", 0.5, 0.5, 1);
        const afc::SparseMatrix t_lin = afc::assemble_convection(mesh, pat, lin, {}, 0.0);
        const afc::SparseMatrix t_quad = afc::assemble_convection(mesh, pat, quad, psi, 0.0);
        for (std::size_t p = 0; p < t_lin.values.size(); ++p)
            CHECK(t_quad.values[p] == Catch::Approx(c * t_lin.values[p]).margin(1e-15));
    }

    SECTION("interior row sums vanish for constant velocity") {
        const afc::FluxField flux = afc::make_constant_flux("const", 1.0, 3.0, 0);
        const afc::SparseMatrix transport = afc::assemble_convection(mesh, pat, flux, {}, 0.0);
        for (int i : mesh.interior_ids) {
            double row = 0.0;
            for (int p = pat->row_ptr[i]; p < pat->row_ptr[i + 1]; ++p) row += transport.values[p];
            CHECK(row == Catch::Approx(0.0).margin(1e-15));
        }
    }
}

TEST_CASE("conjugate gradient solves the interior mass system") {
    const afc::Mesh mesh = afc::build_uniform_mesh(8);
    const auto pat = afc::make_pattern(mesh);
    const afc::SparseMatrix mass = afc::assemble_mass(mesh, pat);

    std::mt19937 rng(7);
    const std::vector<double> x_star = random_field(mesh, rng, true);
    std::vector<double> b(x_star.size());
    mass.matvec(x_star, b);
    for (int i : mesh.boundary_ids) b[i] = 0.0;

    const std::vector<double> x = afc::cg_solve(mass, b, mesh.boundary, 1e-13, 200);
    for (int i = 0; i < mesh.n_nodes(); ++i)
        CHECK(x[i] == Catch::Approx(x_star[i]).margin(1e-10));

    SECTION("zero right-hand side returns zero") {
        const std::vector<double> zero(mesh.n_nodes(), 0.0);
        const std::vector<double> x0 = afc::cg_solve(mass, zero, mesh.boundary);
        for (double v : x0) CHECK(v == 0.0);
    }

    SECTION("iteration cap failure carries the residual") {
        try {
            afc::cg_solve(mass, b, mesh.boundary, 1e-16, 1);
            FAIL("expected CgFailure");
        } catch (const afc::CgFailure& e) {
            CHECK(e.iterations == 1);
            CHECK(e.residual > 0.0);
        }
    }
}

TEST_CASE("interpolation pins boundary entries only when asked") {
    const afc::Mesh mesh = afc::build_uniform_mesh(2);
    const afc::NodalField ones = afc::interpolate(mesh, [](double, double) { return 1.0; }, false);
    for (double v : ones.values) CHECK(v == 1.0);

    const afc::NodalField poly =
        afc::interpolate(mesh, [](double x, double y) { return x * (1 - x) * y * (1 - y); }, false);
    CHECK(poly.values[4] == Catch::Approx(0.0625).margin(1e-16));

    const afc::InitialCondition gauss = afc::builtin_initial("gauss");
    const afc::NodalField g = afc::interpolate(mesh, gauss.value, gauss.enforce_bc);
    for (int i : mesh.boundary_ids) CHECK(g.values[i] == 0.0);
    CHECK(g.values[4] == Catch::Approx(1.0).margin(1e-16));
}

TEST_CASE("L2 error evaluation") {
    const afc::Mesh mesh = afc::build_uniform_mesh(16);

    SECTION("affine fields are reproduced exactly") {
        const auto affine = [](double x, double y, double) { return 0.3 + 1.7 * x - 0.4 * y; };
        const afc::NodalField field =
            afc::interpolate(mesh, [&](double x, double y) { return affine(x, y, 0.0); }, false);
        CHECK(afc::l2_error(mesh, field.values, affine, 0.0) == Catch::Approx(0.0).margin(1e-14));
    }

    SECTION("zero field against the sine bump gives its norm") {
        const std::vector<double> zero(mesh.n_nodes(), 0.0);
        const auto bump = [](double x, double y, double) {
            return std::sin(M_PI * x) * std::sin(M_PI * y);
        };
        // |sin sin|_L2 = 1/2; the rule error is far below the tolerance.
        CHECK(afc::l2_error(mesh, zero, bump, 0.0) == Catch::Approx(0.5).margin(1e-6));
    }

    SECTION("discrete norm equals the exact quadrature of a P1 difference") {
        const auto pat = afc::make_pattern(mesh);
        const afc::SparseMatrix mass = afc::assemble_mass(mesh, pat);
        std::mt19937 rng(3);
        const std::vector<double> e = random_field(mesh, rng, false);
        const auto zero_fn = [](double, double, double) { return 0.0; };
        // The midpoint rule integrates the squared P1 field exactly.
        CHECK(afc::l2_norm_discrete(mass, e) ==
              Catch::Approx(afc::l2_error(mesh, e, zero_fn, 0.0, afc::midpoint_rule()))
                  .epsilon(1e-13));
    }
}

TEST_CASE("consistent and lumped norms stay within the fixed equivalence band") {
    const afc::Mesh mesh = afc::build_uniform_mesh(8);
    const auto pat = afc::make_pattern(mesh);
    const afc::SparseMatrix mass = afc::assemble_mass(mesh, pat);
    const std::vector<double> lumped = afc::lump_mass(mass);

    // The local generalized eigenvalues of (consistent, lumped) element pairs
    // are {1/4, 1/4, 1}, so the ratio lives in [1/2, 1] on any mesh.
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<double> chi = random_field(mesh, rng, false);
        const double consistent = afc::l2_norm_discrete(mass, chi);
        const double lumped_norm = std::sqrt(afc::lumped_inner_product(lumped, chi, chi));
        REQUIRE(lumped_norm > 0.0);
        const double ratio = consistent / lumped_norm;
        CHECK(ratio >= 0.5 - 1e-12);
        CHECK(ratio <= 1.0 + 1e-12);
    }
}

TEST_CASE("mass lumping error decays at second order for smooth fields") {
    const auto psi_fn = [](double x, double y) { return std::sin(M_PI * x) * std::cos(2.0 * y); };
    const auto chi_fn = [](double x, double y) { return std::exp(x - 0.3 * y); };

    std::vector<double> errors;
    for (int m : {8, 16, 32}) {
        const afc::Mesh mesh = afc::build_uniform_mesh(m);
        const auto pat = afc::make_pattern(mesh);
        const afc::SparseMatrix mass = afc::assemble_mass(mesh, pat);
        const std::vector<double> lumped = afc::lump_mass(mass);
        const afc::NodalField psi = afc::interpolate(mesh, psi_fn, false);
        const afc::NodalField chi = afc::interpolate(mesh, chi_fn, false);

        std::vector<double> m_psi(psi.values.size());
        mass.matvec(psi.values, m_psi);
        double consistent = 0.0;
        for (std::size_t i = 0; i < m_psi.size(); ++i) consistent += chi.values[i] * m_psi[i];
        const double lumped_val = afc::lumped_inner_product(lumped, psi.values, chi.values);
        errors.push_back(std::abs(consistent - lumped_val));
    }
    REQUIRE(errors.size() == 3);
    CHECK(std::log2(errors[0] / errors[1]) >= 1.8);
    CHECK(std::log2(errors[1] / errors[2]) >= 1.8);
}
