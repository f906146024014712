#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "afc/flux.hpp"
#include "afc/mesh.hpp"
#include "afc/quadrature.hpp"
#include "afc/sparse.hpp"

namespace afc {

/// Nodal coefficients of a piecewise-linear function, tagged with the time
/// they belong to.
struct NodalField {
    std::vector<double> values;
    double time = 0.0;
};

/// Constant gradients of the three barycentric basis functions on triangle t,
/// plus the (signed) area.
struct ElementGeometry {
    std::array<std::array<double, 2>, 3> grad;
    double area;
};

inline ElementGeometry element_geometry(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    const auto& a = mesh.nodes[static_cast<std::size_t>(tri[0])];
    const auto& b = mesh.nodes[static_cast<std::size_t>(tri[1])];
    const auto& c = mesh.nodes[static_cast<std::size_t>(tri[2])];
    const double area = triangle_area(mesh, t);
    const double inv2a = 1.0 / (2.0 * area);
    ElementGeometry g;
    g.area = area;
    g.grad[0] = {(b[1] - c[1]) * inv2a, (c[0] - b[0]) * inv2a};
    g.grad[1] = {(c[1] - a[1]) * inv2a, (a[0] - c[0]) * inv2a};
    g.grad[2] = {(a[1] - b[1]) * inv2a, (b[0] - a[0]) * inv2a};
    return g;
}

/// Consistent mass matrix; the local block is exact for P1:
/// |K|/12 * [[2,1,1],[1,2,1],[1,1,2]].
inline SparseMatrix assemble_mass(const Mesh& mesh, std::shared_ptr<const SparsePattern> pat) {
    SparseMatrix mass(std::move(pat));
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        const double a12 = triangle_area(mesh, t) / 12.0;
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s)
                mass.add(tri[static_cast<std::size_t>(r)], tri[static_cast<std::size_t>(s)]) += (r == s ? 2.0 : 1.0) * a12;
    }
    return mass;
}

/// Row sums of the consistent mass matrix. All entries are positive, and the
/// total equals the domain area.
inline std::vector<double> lump_mass(const SparseMatrix& mass) {
    const auto& pat = *mass.pat;
    std::vector<double> lumped(static_cast<std::size_t>(pat.n), 0.0);
    for (int i = 0; i < pat.n; ++i)
        for (int p = pat.row_ptr[static_cast<std::size_t>(i)]; p < pat.row_ptr[static_cast<std::size_t>(i) + 1]; ++p)
            lumped[static_cast<std::size_t>(i)] += mass.values[static_cast<std::size_t>(p)];
    return lumped;
}

/// Mass-lumped inner product sum_i m_i psi_i chi_i; equals the vertex-rule
/// quadrature of (psi, chi) over the mesh.
inline double lumped_inner_product(std::span<const double> lumped, std::span<const double> psi,
                                   std::span<const double> chi) {
    double s = 0.0;
    for (std::size_t i = 0; i < lumped.size(); ++i) s += lumped[i] * psi[i] * chi[i];
    return s;
}

/// Discrete transport matrix: entry (i, j) tests the flux carried by basis
/// function j against the gradient of basis function i,
///   tau_ij = integral of (beta psi^exponent phi_j) . grad(phi_i),
/// evaluated with the edge-midpoint rule (exact for the linear case and for
/// the quadratic integrand of the nonlinear case with constant beta).
/// psi is the current P1 iterate entering the nonlinearity; it is ignored
/// when flux.exponent == 0.
inline SparseMatrix assemble_convection(const Mesh& mesh, std::shared_ptr<const SparsePattern> pat,
                                        const FluxField& flux, std::span<const double> psi, double t) {
    SparseMatrix conv(std::move(pat));
    const QuadratureRule& rule = midpoint_rule();
    for (int k = 0; k < mesh.n_triangles(); ++k) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(k)];
        const ElementGeometry geom = element_geometry(mesh, k);
        const auto& z0 = mesh.nodes[static_cast<std::size_t>(tri[0])];
        const auto& z1 = mesh.nodes[static_cast<std::size_t>(tri[1])];
        const auto& z2 = mesh.nodes[static_cast<std::size_t>(tri[2])];

        double local[3][3] = {};
        for (const auto& qp : rule.points) {
            const double x = qp.bary[0] * z0[0] + qp.bary[1] * z1[0] + qp.bary[2] * z2[0];
            const double y = qp.bary[0] * z0[1] + qp.bary[1] * z1[1] + qp.bary[2] * z2[1];
            const std::array<double, 2> beta = flux(x, y, t);
            double weight = qp.weight * geom.area;
            if (flux.exponent != 0) {
                double psi_q = 0.0;
                for (int a = 0; a < 3; ++a)
                    psi_q += qp.bary[static_cast<std::size_t>(a)] * psi[static_cast<std::size_t>(tri[static_cast<std::size_t>(a)])];
                double pow_psi = 1.0;
                for (int e = 0; e < flux.exponent; ++e) pow_psi *= psi_q;
                weight *= pow_psi;
            }
            for (int i = 0; i < 3; ++i) {
                const double beta_dot_grad = beta[0] * geom.grad[static_cast<std::size_t>(i)][0] +
                                             beta[1] * geom.grad[static_cast<std::size_t>(i)][1];
                for (int j = 0; j < 3; ++j)
                    local[i][j] += weight * beta_dot_grad * qp.bary[static_cast<std::size_t>(j)];
            }
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                conv.add(tri[static_cast<std::size_t>(i)], tri[static_cast<std::size_t>(j)]) += local[i][j];
    }
    return conv;
}

/// Nodal interpolant of g; boundary values are forced to zero when
/// enforce_bc is set.
inline NodalField interpolate(const Mesh& mesh, const std::function<double(double, double)>& g,
                              bool enforce_bc, double time = 0.0) {
    NodalField field;
    field.time = time;
    field.values.resize(static_cast<std::size_t>(mesh.n_nodes()));
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        const auto& z = mesh.nodes[static_cast<std::size_t>(i)];
        field.values[static_cast<std::size_t>(i)] =
            (enforce_bc && mesh.is_boundary(i)) ? 0.0 : g(z[0], z[1]);
    }
    return field;
}

/// L2 distance between the P1 field and a reference function at time t.
inline double l2_error(const Mesh& mesh, std::span<const double> field,
                       const std::function<double(double, double, double)>& ref, double t,
                       const QuadratureRule& rule = degree4_rule()) {
    double err2 = 0.0;
    for (int k = 0; k < mesh.n_triangles(); ++k) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(k)];
        const double area = triangle_area(mesh, k);
        const auto& z0 = mesh.nodes[static_cast<std::size_t>(tri[0])];
        const auto& z1 = mesh.nodes[static_cast<std::size_t>(tri[1])];
        const auto& z2 = mesh.nodes[static_cast<std::size_t>(tri[2])];
        for (const auto& qp : rule.points) {
            const double x = qp.bary[0] * z0[0] + qp.bary[1] * z1[0] + qp.bary[2] * z2[0];
            const double y = qp.bary[0] * z0[1] + qp.bary[1] * z1[1] + qp.bary[2] * z2[1];
            double uh = 0.0;
            for (int a = 0; a < 3; ++a)
                uh += qp.bary[static_cast<std::size_t>(a)] * field[static_cast<std::size_t>(tri[static_cast<std::size_t>(a)])];
            const double diff = uh - ref(x, y, t);
            err2 += qp.weight * area * diff * diff;
        }
    }
    return std::sqrt(err2);
}

/// L2 norm of a nodal difference via the consistent mass matrix,
/// sqrt(e^T M e); exact for differences of two P1 fields on the same mesh.
inline double l2_norm_discrete(const SparseMatrix& mass, std::span<const double> e) {
    std::vector<double> me(e.size());
    mass.matvec(e, me);
    double s = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) s += e[i] * me[i];
    return std::sqrt(std::max(s, 0.0));
}

}  // namespace afc
