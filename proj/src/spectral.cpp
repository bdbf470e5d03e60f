#include "phasereg/spectral.hpp"

#include <numbers>

#include "phasereg/fft.hpp"

namespace phasereg {

std::vector<double> apply_multiplier(std::span<const double> signal, const Grid1D& grid,
                                     const Multiplier1D& multiplier) {
    if (signal.size() != grid.n)
        throw InputError("apply_multiplier: signal length does not match grid");
    auto spec = fft(signal);
    for (std::size_t j = 0; j < grid.n; ++j)
        spec[j] *= multiplier(grid.frequency(j));
    return ifft_real(std::move(spec));
}

Array2D apply_multiplier(const Array2D& image, const Grid2D& grid, const Multiplier2D& multiplier) {
    if (image.rows() != grid.rows || image.cols() != grid.cols)
        throw InputError("apply_multiplier: image shape does not match grid");
    ComplexArray2D spec = fft2(image);
    const Grid1D ra = grid.row_axis();
    const Grid1D ca = grid.col_axis();
    std::vector<double> q1(grid.cols);
    for (std::size_t c = 0; c < grid.cols; ++c)
        q1[c] = ca.frequency(c);
    for (std::size_t r = 0; r < grid.rows; ++r) {
        const double q2 = ra.frequency(r);
        for (std::size_t c = 0; c < grid.cols; ++c)
            spec(r, c) *= multiplier(q1[c], q2);
    }
    return ifft2_real(std::move(spec));
}

Array2D apply_multiplier_rows(const Array2D& rows, const Grid1D& grid, const Multiplier1D& multiplier) {
    if (rows.cols() != grid.n)
        throw InputError("apply_multiplier_rows: row length does not match grid");
    ComplexArray2D spec = to_complex(rows);
    fft_rows_inplace(spec, Direction::Forward);
    std::vector<double> w(grid.n);
    for (std::size_t c = 0; c < grid.n; ++c)
        w[c] = multiplier(grid.frequency(c));
    for (std::size_t r = 0; r < rows.rows(); ++r)
        for (std::size_t c = 0; c < grid.n; ++c)
            spec(r, c) *= w[c];
    fft_rows_inplace(spec, Direction::Inverse);
    return real_part(spec);
}

Array2D laplacian(const Array2D& image, const Grid2D& grid) {
    constexpr double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
    return apply_multiplier(image, grid, [](double q1, double q2) { return -four_pi2 * (q1 * q1 + q2 * q2); });
}

std::vector<double> second_derivative(std::span<const double> signal, const Grid1D& grid) {
    constexpr double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
    return apply_multiplier(signal, grid, [](double s) { return -four_pi2 * s * s; });
}

double l2_norm_squared(std::span<const double> values, double cell) {
    double sum = 0.0;
    for (double v : values)
        sum += v * v;
    return sum * cell;
}

} // namespace phasereg
