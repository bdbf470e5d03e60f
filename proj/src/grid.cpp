#include "phasereg/grid.hpp"

#include <cmath>
#include <limits>

namespace phasereg {

Grid1D::Grid1D(std::size_t n_, double delta_) : n(n_), delta(delta_) {
    if (n == 0)
        throw InputError("grid: sample count must be positive");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw InputError("grid: spacing must be positive and finite");
}

double Grid1D::coordinate(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(n / 2)) * delta;
}

double Grid1D::frequency(std::size_t j) const {
    const auto jj = static_cast<long long>(j);
    const auto nn = static_cast<long long>(n);
    const long long k = jj < (nn + 1) / 2 ? jj : jj - nn;
    return static_cast<double>(k) / (static_cast<double>(n) * delta);
}

Grid2D::Grid2D(std::size_t rows_, std::size_t cols_, double delta_) : rows(rows_), cols(cols_), delta(delta_) {
    if (rows == 0 || cols == 0)
        throw InputError("grid: shape must be positive");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw InputError("grid: spacing must be positive and finite");
}

std::vector<double> freq_axis(const Grid1D& grid) {
    std::vector<double> out(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j)
        out[j] = grid.frequency(j);
    return out;
}

std::vector<double> coordinates(const Grid1D& grid) {
    std::vector<double> out(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j)
        out[j] = grid.coordinate(j);
    return out;
}

CutoffMask::CutoffMask(double m, double delta) : m_(m) {
    if (!(m > 0.0))
        throw InputError("mask: cutoff multiplier m must be positive");
    if (!(delta > 0.0))
        throw InputError("mask: spacing must be positive");
    q_c_ = std::isinf(m) ? std::numeric_limits<double>::infinity() : m / (2.0 * delta);
}

CutoffMask CutoffMask::full() {
    CutoffMask mask;
    mask.m_ = std::numeric_limits<double>::infinity();
    mask.q_c_ = std::numeric_limits<double>::infinity();
    return mask;
}

CutoffMask CutoffMask::from_cutoff(double q_c) {
    if (!(q_c > 0.0))
        throw InputError("mask: cutoff frequency must be positive");
    CutoffMask mask;
    mask.m_ = std::numeric_limits<double>::quiet_NaN();
    mask.q_c_ = q_c;
    return mask;
}

bool CutoffMask::is_full() const { return std::isinf(q_c_); }

// Relative slack so that a cutoff landing exactly on a bin admits it.
bool CutoffMask::admits(double sigma) const { return std::abs(sigma) <= q_c_ * (1.0 + 1e-12); }

bool CutoffMask::admits(double q1, double q2) const { return admits(q1) && admits(q2); }

void apply_mask(std::span<Complex> spectrum, const Grid1D& grid, const CutoffMask& mask) {
    if (spectrum.size() != grid.n)
        throw InputError("apply_mask: spectrum length does not match grid");
    if (mask.is_full())
        return;
    for (std::size_t j = 0; j < grid.n; ++j)
        if (!mask.admits(grid.frequency(j)))
            spectrum[j] = 0.0;
}

void apply_mask(ComplexArray2D& spectrum, const Grid2D& grid, const CutoffMask& mask) {
    if (spectrum.rows() != grid.rows || spectrum.cols() != grid.cols)
        throw InputError("apply_mask: spectrum shape does not match grid");
    if (mask.is_full())
        return;
    const Grid1D ra = grid.row_axis();
    const Grid1D ca = grid.col_axis();
    for (std::size_t r = 0; r < grid.rows; ++r) {
        const double q2 = ra.frequency(r);
        for (std::size_t c = 0; c < grid.cols; ++c)
            if (!mask.admits(ca.frequency(c), q2))
                spectrum(r, c) = 0.0;
    }
}

} // namespace phasereg
