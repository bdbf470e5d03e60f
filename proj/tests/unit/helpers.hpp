#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "phasereg/grid.hpp"
#include "phasereg/matrix.hpp"
#include "phasereg/spectral.hpp"

namespace testutil {

using phasereg::Array2D;
using phasereg::Grid2D;

inline constexpr double pi = std::numbers::pi;

inline Array2D random_field(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double lo = -1.0,
                            double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Array2D a(rows, cols);
    for (auto& v : a.values())
        v = u(rng);
    return a;
}

// White noise blurred by a Gaussian of the given width, scaled to unit max.
inline Array2D smooth_field(const Grid2D& grid, std::mt19937_64& rng, double width) {
    const Array2D noise = random_field(grid.rows, grid.cols, rng);
    const double k = 2.0 * pi * pi * width * width;
    Array2D s = phasereg::apply_multiplier(noise, grid, [k](double q1, double q2) {
        return std::exp(-k * (q1 * q1 + q2 * q2));
    });
    double peak = 0.0;
    for (double v : s.values())
        peak = std::max(peak, std::abs(v));
    for (auto& v : s.values())
        v /= peak;
    return s;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs_diff(const Array2D& a, const Array2D& b) { return max_abs_diff(a.values(), b.values()); }

inline double rms(const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a)
        s += v * v;
    return std::sqrt(s / static_cast<double>(a.size()));
}

inline double rms_diff(const Array2D& a, const Array2D& b) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = a.values()[i] - b.values()[i];
    return rms(d);
}

}  // namespace testutil
