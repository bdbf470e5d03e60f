#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "phasereg/matrix.hpp"

namespace phasereg {

// Uniform sampling. Sample j sits at (j - n/2) * delta so that the origin is a sample.
struct Grid1D {
    std::size_t n = 0;
    double delta = 0.0;

    Grid1D() = default;
    Grid1D(std::size_t n, double delta);

    double coordinate(std::size_t j) const;
    double length() const { return static_cast<double>(n) * delta; }
    // DFT frequency of bin j in cycles per unit length.
    double frequency(std::size_t j) const;
    double frequency_step() const { return 1.0 / length(); }
    double nyquist() const { return 0.5 / delta; }
};

// Square-pixel 2D grid. rows run along y2, cols along y1.
struct Grid2D {
    std::size_t rows = 0;
    std::size_t cols = 0;
    double delta = 0.0;

    Grid2D() = default;
    Grid2D(std::size_t rows, std::size_t cols, double delta);

    Grid1D row_axis() const { return {rows, delta}; }
    Grid1D col_axis() const { return {cols, delta}; }
    double cell_area() const { return delta * delta; }
};

std::vector<double> freq_axis(const Grid1D& grid);
std::vector<double> coordinates(const Grid1D& grid);

// Sharp cutoff: keeps frequencies with |q|_inf <= q_c = m / (2 delta).
class CutoffMask {
public:
    // m = +inf keeps every frequency.
    CutoffMask(double m, double delta);
    static CutoffMask full();
    static CutoffMask from_cutoff(double q_c);

    double m() const { return m_; }
    double q_c() const { return q_c_; }
    bool is_full() const;
    bool admits(double sigma) const;
    bool admits(double q1, double q2) const;

private:
    CutoffMask() = default;
    double m_ = 0.0;
    double q_c_ = 0.0;
};

void apply_mask(std::span<Complex> spectrum, const Grid1D& grid, const CutoffMask& mask);
void apply_mask(ComplexArray2D& spectrum, const Grid2D& grid, const CutoffMask& mask);

} // namespace phasereg
