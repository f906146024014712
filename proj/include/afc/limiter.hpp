#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <vector>

#include "afc/mesh.hpp"
#include "afc/sparse.hpp"

namespace afc {

/// Symmetric artificial diffusion built from a transport matrix. For j != i,
/// d_ij = max(-tau_ij, 0, -tau_ji); the diagonal makes every row sum vanish.
/// Column sums vanish too by symmetry, and T + D has no negative
/// off-diagonal entries, which is what the bound-preservation argument needs.
struct DiffusionOperator {
    SparseMatrix matrix;
};

inline DiffusionOperator artificial_diffusion(const SparseMatrix& transport) {
    const SparsePattern& pat = *transport.pat;
    DiffusionOperator diff{SparseMatrix(transport.pat)};
    SparseMatrix& d = diff.matrix;
    for (const auto& e : pat.edges) {
        const double dij = std::max({-transport.values[static_cast<std::size_t>(e.pij)], 0.0,
                                     -transport.values[static_cast<std::size_t>(e.pji)]});
        d.values[static_cast<std::size_t>(e.pij)] = dij;
        d.values[static_cast<std::size_t>(e.pji)] = dij;
        d.values[static_cast<std::size_t>(pat.diag[static_cast<std::size_t>(e.i)])] -= dij;
        d.values[static_cast<std::size_t>(pat.diag[static_cast<std::size_t>(e.j)])] -= dij;
    }
    return diff;
}

/// Raw antidiffusive fluxes r_ij = d_ij (alpha_i - alpha_j), stored once per
/// unordered pair in the i < j orientation; r_ji = -r_ij by construction.
struct FluxSet {
    std::shared_ptr<const SparsePattern> pat;
    std::vector<double> edge_flux;  // one entry per pat->edges, oriented i -> j
};

inline FluxSet antidiffusive_fluxes(const DiffusionOperator& diff, std::span<const double> alpha) {
    const SparsePattern& pat = *diff.matrix.pat;
    FluxSet fluxes{diff.matrix.pat, std::vector<double>(pat.edges.size())};
    for (std::size_t k = 0; k < pat.edges.size(); ++k) {
        const auto& e = pat.edges[k];
        fluxes.edge_flux[k] = diff.matrix.values[static_cast<std::size_t>(e.pij)] *
                              (alpha[static_cast<std::size_t>(e.i)] - alpha[static_cast<std::size_t>(e.j)]);
    }
    return fluxes;
}

/// Per-edge correction factors a_ij in [0,1] together with the per-node
/// bookkeeping they came from. Boundary nodes never limit (their ratios stay
/// at 1), so a boundary-boundary edge keeps a_ij = 1 and an interior-boundary
/// edge is constrained by the interior endpoint alone.
struct LimiterFactors {
    std::shared_ptr<const SparsePattern> pat;
    std::vector<double> a_edge;  // min(a_ij, a_ji), one entry per pat->edges
    std::vector<double> p_plus, p_minus;  // signed flux sums
    std::vector<double> q_plus, q_minus;  // admissible correction bounds
    std::vector<double> r_plus, r_minus;  // clipped ratios
    std::vector<double> q_weight;         // q_i = gamma_i * sum_j d_ij
};

/// Zalesak-style factors for the given diffusion operator, fluxes, and state.
/// gamma optionally scales each node's q_i; empty means gamma_i = 1, which is
/// the linearity-preserving choice on meshes whose interior patches are
/// point-symmetric (true for the built-in uniform mesh).
inline LimiterFactors correction_factors(const Mesh& mesh, const DiffusionOperator& diff,
                                         const FluxSet& fluxes, std::span<const double> alpha,
                                         std::span<const double> gamma = {}) {
    const SparsePattern& pat = *diff.matrix.pat;
    const std::size_t n = static_cast<std::size_t>(pat.n);
    LimiterFactors f;
    f.pat = diff.matrix.pat;
    f.p_plus.assign(n, 0.0);
    f.p_minus.assign(n, 0.0);
    f.q_plus.assign(n, 0.0);
    f.q_minus.assign(n, 0.0);
    f.r_plus.assign(n, 1.0);
    f.r_minus.assign(n, 1.0);
    f.q_weight.assign(n, 0.0);

    // Flux sums per node; each edge contributes with opposite signs to its
    // two endpoints.
    for (std::size_t k = 0; k < pat.edges.size(); ++k) {
        const auto& e = pat.edges[k];
        const double r = fluxes.edge_flux[k];
        if (r > 0.0) {
            f.p_plus[static_cast<std::size_t>(e.i)] += r;
            f.p_minus[static_cast<std::size_t>(e.j)] -= r;
        } else if (r < 0.0) {
            f.p_minus[static_cast<std::size_t>(e.i)] += r;
            f.p_plus[static_cast<std::size_t>(e.j)] -= r;
        }
    }

    for (int i : mesh.interior_ids) {
        const std::size_t si = static_cast<std::size_t>(i);
        double qi = 0.0, amax = alpha[si], amin = alpha[si];
        for (int p = pat.row_ptr[si]; p < pat.row_ptr[si + 1]; ++p) {
            const int j = pat.col[static_cast<std::size_t>(p)];
            if (j == i) continue;
            qi += diff.matrix.values[static_cast<std::size_t>(p)];
            amax = std::max(amax, alpha[static_cast<std::size_t>(j)]);
            amin = std::min(amin, alpha[static_cast<std::size_t>(j)]);
        }
        if (!gamma.empty()) qi *= gamma[si];
        f.q_weight[si] = qi;
        f.q_plus[si] = qi * (amax - alpha[si]);
        f.q_minus[si] = qi * (amin - alpha[si]);
        if (f.p_plus[si] > 0.0) f.r_plus[si] = std::min(1.0, f.q_plus[si] / f.p_plus[si]);
        if (f.p_minus[si] < 0.0) f.r_minus[si] = std::min(1.0, f.q_minus[si] / f.p_minus[si]);
    }

    f.a_edge.resize(pat.edges.size());
    for (std::size_t k = 0; k < pat.edges.size(); ++k) {
        const auto& e = pat.edges[k];
        const double r = fluxes.edge_flux[k];
        // Factor seen from node i (flux r) and from node j (flux -r).
        const double ai = r > 0.0 ? f.r_plus[static_cast<std::size_t>(e.i)]
                                  : (r < 0.0 ? f.r_minus[static_cast<std::size_t>(e.i)] : 1.0);
        const double aj = r > 0.0 ? f.r_minus[static_cast<std::size_t>(e.j)]
                                  : (r < 0.0 ? f.r_plus[static_cast<std::size_t>(e.j)] : 1.0);
        f.a_edge[k] = std::min(ai, aj);
    }
    return f;
}

/// Limited antidiffusive correction rbar_i = sum_j a_ij r_ij. For interior i
/// this lands in [Q_i^-, Q_i^+] by construction of the factors.
inline std::vector<double> afc_correction(const LimiterFactors& factors, const FluxSet& fluxes) {
    const SparsePattern& pat = *factors.pat;
    std::vector<double> rbar(static_cast<std::size_t>(pat.n), 0.0);
    for (std::size_t k = 0; k < pat.edges.size(); ++k) {
        const auto& e = pat.edges[k];
        const double ar = factors.a_edge[k] * fluxes.edge_flux[k];
        rbar[static_cast<std::size_t>(e.i)] += ar;
        rbar[static_cast<std::size_t>(e.j)] -= ar;
    }
    return rbar;
}

/// Edgewise stabilization form sum_{i<j} d_ij (v_i - v_j)(z_i - z_j);
/// equals -z^T (D v) and is nonnegative for v == z.
inline double dh_form(const DiffusionOperator& diff, std::span<const double> v,
                      std::span<const double> z) {
    const SparsePattern& pat = *diff.matrix.pat;
    double s = 0.0;
    for (const auto& e : pat.edges) {
        const std::size_t i = static_cast<std::size_t>(e.i), j = static_cast<std::size_t>(e.j);
        s += diff.matrix.values[static_cast<std::size_t>(e.pij)] * (v[i] - v[j]) * (z[i] - z[j]);
    }
    return s;
}

/// Limited counterpart: sum_{i<j} (1 - a_ij) d_ij (v_i - v_j)(z_i - z_j).
inline double dhat_form(const DiffusionOperator& diff, const LimiterFactors& factors,
                        std::span<const double> v, std::span<const double> z) {
    const SparsePattern& pat = *diff.matrix.pat;
    double s = 0.0;
    for (std::size_t k = 0; k < pat.edges.size(); ++k) {
        const auto& e = pat.edges[k];
        const std::size_t i = static_cast<std::size_t>(e.i), j = static_cast<std::size_t>(e.j);
        s += (1.0 - factors.a_edge[k]) * diff.matrix.values[static_cast<std::size_t>(e.pij)] *
             (v[i] - v[j]) * (z[i] - z[j]);
    }
    return s;
}

/// Diagnostic CSV: one "node" row per mesh node with the limiter bookkeeping,
/// then one "edge" row per pattern edge with the flux and final factor.
inline void write_limiter_csv(std::ostream& os, const Mesh& mesh, const LimiterFactors& factors,
                              const FluxSet& fluxes) {
    os << "kind,i,j,x,y,p_plus,p_minus,q_plus,q_minus,r_plus,r_minus,q_weight,flux,a\n";
    char buf[512];
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        std::snprintf(buf, sizeof buf, "node,%d,,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,,\n",
                      i, mesh.nodes[si][0], mesh.nodes[si][1], factors.p_plus[si], factors.p_minus[si],
                      factors.q_plus[si], factors.q_minus[si], factors.r_plus[si], factors.r_minus[si],
                      factors.q_weight[si]);
        os << buf;
    }
    const SparsePattern& pat = *factors.pat;
    for (std::size_t k = 0; k < pat.edges.size(); ++k) {
        const auto& e = pat.edges[k];
        std::snprintf(buf, sizeof buf, "edge,%d,%d,,,,,,,,,,%.17g,%.17g\n", e.i, e.j,
                      fluxes.edge_flux[k], factors.a_edge[k]);
        os << buf;
    }
}

}  // namespace afc
