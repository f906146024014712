#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "afc/mesh.hpp"

namespace afc {

/// CSR sparsity pattern shared by every matrix on a given mesh: one entry per
/// node pair connected by an edge, plus the diagonal. Columns are sorted
/// within each row. "edges" lists each off-diagonal pair (i < j) once
/// together with the value positions of both orientations.
struct SparsePattern {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<int> diag;    // value position of (i, i)
    std::vector<int> mirror;  // value position of the transposed entry

    struct Edge {
        int i, j;      // i < j
        int pij, pji;  // value positions of (i, j) and (j, i)
    };
    std::vector<Edge> edges;

    int nnz() const { return static_cast<int>(col.size()); }

    /// Value position of (i, j), or -1 if the pair is not in the pattern.
    int find(int i, int j) const {
        for (int p = row_ptr[static_cast<std::size_t>(i)]; p < row_ptr[static_cast<std::size_t>(i) + 1]; ++p)
            if (col[static_cast<std::size_t>(p)] == j) return p;
        return -1;
    }
};

inline std::shared_ptr<const SparsePattern> make_pattern(const Mesh& mesh) {
    auto pat = std::make_shared<SparsePattern>();
    pat->n = mesh.n_nodes();
    pat->row_ptr.assign(static_cast<std::size_t>(pat->n) + 1, 0);
    for (int i = 0; i < pat->n; ++i)
        pat->row_ptr[static_cast<std::size_t>(i) + 1] =
            pat->row_ptr[static_cast<std::size_t>(i)] +
            static_cast<int>(mesh.node_patch[static_cast<std::size_t>(i)].size()) + 1;
    pat->col.resize(static_cast<std::size_t>(pat->row_ptr.back()));
    pat->diag.resize(static_cast<std::size_t>(pat->n));
    for (int i = 0; i < pat->n; ++i) {
        int p = pat->row_ptr[static_cast<std::size_t>(i)];
        bool placed = false;
        for (int j : mesh.node_patch[static_cast<std::size_t>(i)]) {
            if (!placed && i < j) {  // patch ids are sorted; insert the diagonal in order
                pat->diag[static_cast<std::size_t>(i)] = p;
                pat->col[static_cast<std::size_t>(p++)] = i;
                placed = true;
            }
            pat->col[static_cast<std::size_t>(p++)] = j;
        }
        if (!placed) {
            pat->diag[static_cast<std::size_t>(i)] = p;
            pat->col[static_cast<std::size_t>(p++)] = i;
        }
    }
    pat->mirror.resize(pat->col.size());
    for (int i = 0; i < pat->n; ++i) {
        for (int p = pat->row_ptr[static_cast<std::size_t>(i)]; p < pat->row_ptr[static_cast<std::size_t>(i) + 1]; ++p) {
            const int j = pat->col[static_cast<std::size_t>(p)];
            pat->mirror[static_cast<std::size_t>(p)] = pat->find(j, i);
            if (i < j) pat->edges.push_back({i, j, p, pat->mirror[static_cast<std::size_t>(p)]});
        }
    }
    return pat;
}

/// Square matrix with values stored on a shared SparsePattern.
struct SparseMatrix {
    std::shared_ptr<const SparsePattern> pat;
    std::vector<double> values;

    SparseMatrix() = default;
    explicit SparseMatrix(std::shared_ptr<const SparsePattern> p)
        : pat(std::move(p)), values(static_cast<std::size_t>(pat->nnz()), 0.0) {}

    int n() const { return pat->n; }
    void clear() { values.assign(values.size(), 0.0); }

    double& add(int i, int j) {
        const int p = pat->find(i, j);
        if (p < 0) throw std::out_of_range("SparseMatrix: (" + std::to_string(i) + "," + std::to_string(j) + ") not in pattern");
        return values[static_cast<std::size_t>(p)];
    }
    double get(int i, int j) const {
        const int p = pat->find(i, j);
        return p < 0 ? 0.0 : values[static_cast<std::size_t>(p)];
    }
    double diag(int i) const { return values[static_cast<std::size_t>(pat->diag[static_cast<std::size_t>(i)])]; }

    void matvec(std::span<const double> x, std::span<double> y) const {
        for (int i = 0; i < pat->n; ++i) {
            double s = 0.0;
            for (int p = pat->row_ptr[static_cast<std::size_t>(i)]; p < pat->row_ptr[static_cast<std::size_t>(i) + 1]; ++p)
                s += values[static_cast<std::size_t>(p)] * x[static_cast<std::size_t>(pat->col[static_cast<std::size_t>(p)])];
            y[static_cast<std::size_t>(i)] = s;
        }
    }
    std::vector<double> operator*(const std::vector<double>& x) const {
        std::vector<double> y(x.size());
        matvec(x, y);
        return y;
    }
};

struct CgFailure : std::runtime_error {
    double residual;
    int iterations;
    CgFailure(double res, int iters)
        : std::runtime_error("cg_solve: no convergence after " + std::to_string(iters) +
                             " iterations, relative residual " + std::to_string(res)),
          residual(res), iterations(iters) {}
};

/// Jacobi-preconditioned CG on the rows/columns not masked out. Masked
/// entries of the solution stay at zero; masked entries of b are ignored.
/// Tolerance is relative to ||b|| on the free rows.
inline std::vector<double> cg_solve(const SparseMatrix& A, std::span<const double> b,
                                    std::span<const std::uint8_t> mask,
                                    double tol = 1e-12, int max_iter = 1000) {
    const int n = A.n();
    const auto masked = [&](int i) { return !mask.empty() && mask[static_cast<std::size_t>(i)] != 0; };

    std::vector<double> x(static_cast<std::size_t>(n), 0.0), r(static_cast<std::size_t>(n), 0.0);
    std::vector<double> z(static_cast<std::size_t>(n), 0.0), p(static_cast<std::size_t>(n), 0.0);
    std::vector<double> Ap(static_cast<std::size_t>(n), 0.0), inv_diag(static_cast<std::size_t>(n), 0.0);

    double b_norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
        if (masked(i)) continue;
        r[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)];
        b_norm2 += b[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
        const double d = A.diag(i);
        if (d == 0.0) throw std::runtime_error("cg_solve: zero diagonal at free row " + std::to_string(i));
        inv_diag[static_cast<std::size_t>(i)] = 1.0 / d;
    }
    if (b_norm2 == 0.0) return x;

    double rz = 0.0;
    for (int i = 0; i < n; ++i) {
        z[static_cast<std::size_t>(i)] = inv_diag[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
        rz += r[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
    }
    p = z;

    double res2 = b_norm2;
    for (int it = 0; it < max_iter; ++it) {
        A.matvec(p, Ap);
        double pAp = 0.0;
        for (int i = 0; i < n; ++i) {
            if (masked(i)) { Ap[static_cast<std::size_t>(i)] = 0.0; continue; }
            pAp += p[static_cast<std::size_t>(i)] * Ap[static_cast<std::size_t>(i)];
        }
        const double alpha = rz / pAp;
        res2 = 0.0;
        for (int i = 0; i < n; ++i) {
            x[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)];
            r[static_cast<std::size_t>(i)] -= alpha * Ap[static_cast<std::size_t>(i)];
            res2 += r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
        }
        if (res2 <= tol * tol * b_norm2) return x;
        double rz_next = 0.0;
        for (int i = 0; i < n; ++i) {
            z[static_cast<std::size_t>(i)] = inv_diag[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
            rz_next += r[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
        }
        const double beta = rz_next / rz;
        rz = rz_next;
        for (int i = 0; i < n; ++i)
            p[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] + beta * p[static_cast<std::size_t>(i)];
    }
    throw CgFailure(std::sqrt(res2 / b_norm2), max_iter);
}

}  // namespace afc
