#pragma once

#include <functional>
#include <span>
#include <vector>

#include "phasereg/grid.hpp"

namespace phasereg {

using Multiplier1D = std::function<double(double sigma)>;
using Multiplier2D = std::function<double(double q1, double q2)>;

// Periodic Fourier multipliers on real data. q1 is the column (y1) frequency.
std::vector<double> apply_multiplier(std::span<const double> signal, const Grid1D& grid,
                                     const Multiplier1D& multiplier);
Array2D apply_multiplier(const Array2D& image, const Grid2D& grid, const Multiplier2D& multiplier);
// Same multiplier on every row; the row axis is `grid`.
Array2D apply_multiplier_rows(const Array2D& rows, const Grid1D& grid, const Multiplier1D& multiplier);

// Spectral Laplacian, symbol -4 pi^2 |q|^2.
Array2D laplacian(const Array2D& image, const Grid2D& grid);
std::vector<double> second_derivative(std::span<const double> signal, const Grid1D& grid);

double l2_norm_squared(std::span<const double> values, double cell);

} // namespace phasereg
