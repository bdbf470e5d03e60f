#pragma once

#include <vector>

#include "phasereg/types.hpp"

namespace phasereg {

// Parallel-beam geometry: the ray (t, theta) is {x : x . (cos theta, sin theta) = t}.
// x is the column (y1) coordinate, y the row (y2) coordinate.

// Line integrals by ray marching with bilinear sampling, step delta/2.
Sinogram radon(const Slice& s, const std::vector<double>& angles, const Grid1D& t_grid);

// B g(x) = sum_theta g(x . xi_theta, theta) w_theta, linear interpolation in t.
Slice backproject_direct(const Sinogram& g, const Grid2D& out_grid);

struct BstOptions {
    int oversampling = 2;  // Cartesian frequency grid is oversampling * N
    int row_padding = 8;   // rows zero-padded to row_padding * n_t before the FFT
};

// Backprojection through the polar Fourier domain: rows -> FFT -> 1/|sigma| ->
// bilinear polar-to-Cartesian gridding -> inverse 2D FFT. The sigma = 0 sample
// is dropped. Needs uniformly spaced angles jπ/n.
Slice backproject_bst(const Sinogram& g, const Grid2D& out_grid, const BstOptions& options = {});

enum class Backprojector { Direct, Bst };

// s_ell = B F^2 [T_ell g]: rows weighted by |sigma| / (1 + 4 pi^2 ell sigma^2)
// (zero-padded to 2 n_t), then backprojected. The BST backend feeds the same
// row weight through its 1/|sigma| step, so the gridded spectrum is T_ell g^.
Slice recon_fbp(const Sinogram& g, double ell, const Grid2D& out_grid, const CutoffMask& mask = CutoffMask::full(),
                Backprojector backend = Backprojector::Direct, const BstOptions& options = {});

// Angular quadrature weights: half the gap to each neighbour, wrapping at pi.
std::vector<double> angle_weights(const std::vector<double>& angles);

} // namespace phasereg
