#pragma once

// Hand-derived reference values for the 2-subdivision mesh of the unit
// square (9 nodes, 8 triangles, one interior node). The matrices were
// integrated symbolically over the 8-triangle patchwork and are stored as
// exact fractions; dense layout, absent entries are zero.
//
// Node numbering (lexicographic by row):
//   6 7 8        y = 1
//   3 4 5        y = 1/2
//   0 1 2        y = 0
// Node 4 at (1/2, 1/2) is the only interior node.

namespace m2_reference {

inline constexpr int n_nodes = 9;
inline constexpr int n_triangles = 8;

inline constexpr double node_xy[n_nodes][2] = {
    {0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0},
    {0.0, 0.5}, {0.5, 0.5}, {1.0, 0.5},
    {0.0, 1.0}, {0.5, 1.0}, {1.0, 1.0},
};

inline constexpr int triangles[n_triangles][3] = {
    {0, 1, 4}, {0, 4, 3}, {1, 2, 5}, {1, 5, 4},
    {3, 4, 7}, {3, 7, 6}, {4, 5, 8}, {4, 8, 7},
};

// Consistent mass matrix, integral of phi_i phi_j.
inline const double mass[n_nodes][n_nodes] = {
    {1.0 / 24, 1.0 / 96, 0, 1.0 / 96, 1.0 / 48, 0, 0, 0, 0},
    {1.0 / 96, 1.0 / 16, 1.0 / 96, 0, 1.0 / 48, 1.0 / 48, 0, 0, 0},
    {0, 1.0 / 96, 1.0 / 48, 0, 0, 1.0 / 96, 0, 0, 0},
    {1.0 / 96, 0, 0, 1.0 / 16, 1.0 / 48, 0, 1.0 / 96, 1.0 / 48, 0},
    {1.0 / 48, 1.0 / 48, 0, 1.0 / 48, 1.0 / 8, 1.0 / 48, 0, 1.0 / 48, 1.0 / 48},
    {0, 1.0 / 48, 1.0 / 96, 0, 1.0 / 48, 1.0 / 16, 0, 0, 1.0 / 96},
    {0, 0, 0, 1.0 / 96, 0, 0, 1.0 / 48, 1.0 / 96, 0},
    {0, 0, 0, 1.0 / 48, 1.0 / 48, 0, 1.0 / 96, 1.0 / 16, 1.0 / 96},
    {0, 0, 0, 0, 1.0 / 48, 1.0 / 96, 0, 1.0 / 96, 1.0 / 24},
};

// Row sums of the mass matrix.
inline const double lumped[n_nodes] = {
    1.0 / 12, 1.0 / 8, 1.0 / 24, 1.0 / 8, 1.0 / 4, 1.0 / 8, 1.0 / 24, 1.0 / 8, 1.0 / 12,
};

// Transport matrix for beta = (1, 0) and linear flux: integral of
// phi_j * d(phi_i)/dx.
inline const double transport[n_nodes][n_nodes] = {
    {-1.0 / 12, -1.0 / 12, 0, 0, -1.0 / 12, 0, 0, 0, 0},
    {1.0 / 12, 0, -1.0 / 12, 0, 1.0 / 12, -1.0 / 12, 0, 0, 0},
    {0, 1.0 / 12, 1.0 / 12, 0, 0, 1.0 / 12, 0, 0, 0},
    {-1.0 / 12, 0, 0, -1.0 / 6, -1.0 / 6, 0, 0, -1.0 / 12, 0},
    {1.0 / 12, -1.0 / 12, 0, 1.0 / 6, 0, -1.0 / 6, 0, 1.0 / 12, -1.0 / 12},
    {0, 1.0 / 12, 0, 0, 1.0 / 6, 1.0 / 6, 0, 0, 1.0 / 12},
    {0, 0, 0, -1.0 / 12, 0, 0, -1.0 / 12, -1.0 / 12, 0},
    {0, 0, 0, 1.0 / 12, -1.0 / 12, 0, 1.0 / 12, 0, -1.0 / 12},
    {0, 0, 0, 0, 1.0 / 12, 0, 0, 1.0 / 12, 1.0 / 12},
};

// Artificial diffusion built from the transport matrix above:
// d_ij = max(-t_ij, 0, -t_ji) off the diagonal, zero row sums.
inline const double diffusion[n_nodes][n_nodes] = {
    {-1.0 / 4, 1.0 / 12, 0, 1.0 / 12, 1.0 / 12, 0, 0, 0, 0},
    {1.0 / 12, -1.0 / 3, 1.0 / 12, 0, 1.0 / 12, 1.0 / 12, 0, 0, 0},
    {0, 1.0 / 12, -1.0 / 12, 0, 0, 0, 0, 0, 0},
    {1.0 / 12, 0, 0, -5.0 / 12, 1.0 / 6, 0, 1.0 / 12, 1.0 / 12, 0},
    {1.0 / 12, 1.0 / 12, 0, 1.0 / 6, -2.0 / 3, 1.0 / 6, 0, 1.0 / 12, 1.0 / 12},
    {0, 1.0 / 12, 0, 0, 1.0 / 6, -1.0 / 4, 0, 0, 0},
    {0, 0, 0, 1.0 / 12, 0, 0, -1.0 / 6, 1.0 / 12, 0},
    {0, 0, 0, 1.0 / 12, 1.0 / 12, 0, 1.0 / 12, -1.0 / 3, 1.0 / 12},
    {0, 0, 0, 0, 1.0 / 12, 0, 0, 1.0 / 12, -1.0 / 6},
};

// Handy scalars for the single-interior-node reduction: with boundary values
// pinned to zero the interior coefficient obeys y' = lambda * y for the
// low-order right-hand side, lambda = (transport + diffusion)[4][4] / lumped[4].
inline constexpr int interior_node = 4;
inline const double interior_lumped_mass = 1.0 / 4;
inline const double interior_low_order_diag = -2.0 / 3;  // (T + D) at (4,4)
inline const double interior_rate = -8.0 / 3;            // diag / lumped mass

}  // namespace m2_reference
