#include "phasereg/simulate.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "phasereg/parallel.hpp"
#include "phasereg/spectral.hpp"

namespace phasereg {

namespace {

constexpr double kFourPi2 = 4.0 * std::numbers::pi * std::numbers::pi;

void check_L(double L) {
    if (!(L >= 0.0) || !std::isfinite(L))
        throw InputError("propagate: L must be finite and nonnegative");
}

} // namespace

Grid1D default_line_grid() { return {32768, 1.0 / 1024.0}; }

RectProfile rect_phantom(const Phantom1D& ph) {
    if (!(ph.w > 0.0) || !(ph.n > 0.0))
        throw InputError("rect_phantom: w and n must be positive");
    const Grid1D& g = ph.grid;
    if (g.coordinate(0) > -1.0 || g.coordinate(g.n - 1) < 1.0)
        throw InputError("rect_phantom: grid must span at least [-1, 1]");
    const double inv_n = 1.0 / ph.n;
    const double scale = 1.0 / (2.0 * ph.w);
    auto s0 = [&](double t) { return t / std::sqrt(t * t + inv_n); };
    auto s1 = [&](double t) { return inv_n * std::pow(t * t + inv_n, -1.5); };
    auto s2 = [&](double t) { return -3.0 * t * inv_n * std::pow(t * t + inv_n, -2.5); };
    RectProfile out;
    out.p.resize(g.n);
    out.dp.resize(g.n);
    out.d2p.resize(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double t = g.coordinate(j);
        out.p[j] = scale * (s0(t + 0.5) - s0(t - 0.5));
        out.dp[j] = scale * (s1(t + 0.5) - s1(t - 0.5));
        out.d2p[j] = scale * (s2(t + 0.5) - s2(t - 0.5));
    }
    return out;
}

std::vector<double> propagate_1d(const RectProfile& profile, double L) {
    check_L(L);
    const std::size_t n = profile.p.size();
    if (profile.dp.size() != n || profile.d2p.size() != n)
        throw InputError("propagate_1d: profile arrays differ in length");
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = (L * (profile.d2p[j] - profile.dp[j] * profile.dp[j]) + 1.0) * std::exp(-profile.p[j]);
    return out;
}

std::vector<double> propagate_1d_spectral(const std::vector<double>& p, const Grid1D& grid, double L) {
    check_L(L);
    std::vector<double> u(p.size());
    for (std::size_t j = 0; j < p.size(); ++j)
        u[j] = std::exp(-p[j]);
    return apply_multiplier(u, grid, [L](double s) { return 1.0 + kFourPi2 * L * s * s; });
}

Frame propagate_2d(const Array2D& p, const Grid2D& grid, double L) {
    check_L(L);
    if (p.rows() != grid.rows || p.cols() != grid.cols)
        throw InputError("propagate_2d: phase map shape does not match grid");
    Array2D u(p.rows(), p.cols());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p.values()[i]))
            throw InputError("propagate_2d: phase map must be finite");
        u.values()[i] = std::exp(-p.values()[i]);
    }
    Array2D f = apply_multiplier(u, grid, [L](double q1, double q2) { return 1.0 + kFourPi2 * L * (q1 * q1 + q2 * q2); });
    for (double v : f.values())
        if (!(v > 0.0))
            throw NumericalError("propagate_2d: intensity not positive; L is outside the model's validity for this phantom");
    return {std::move(f), grid};
}

std::vector<double> DistanceSeries::L_values() const {
    if (distances.size() < 2)
        throw InputError("distance_series: at least two distances required");
    std::vector<double> out;
    for (std::size_t k = 0; k < distances.size(); ++k) {
        if (!(distances[k] > 0.0) || (k > 0 && !(distances[k] > distances[k - 1])))
            throw InputError("distance_series: distances must be positive and increasing");
        PhysicalParams p = params;
        p.d = distances[k];
        out.push_back(physical_L(p));
    }
    return out;
}

std::vector<Frame> distance_series(const Array2D& p, const Grid2D& grid, const DistanceSeries& series) {
    const auto Ls = series.L_values();
    std::vector<Frame> out(Ls.size());
    parallel_for(Ls.size(), [&](std::size_t k) { out[k] = propagate_2d(p, grid, Ls[k]); });
    return out;
}

std::vector<Signal1D> distance_series(const RectProfile& profile, const Grid1D& grid, const DistanceSeries& series) {
    const auto Ls = series.L_values();
    std::vector<Signal1D> out;
    for (double L : Ls) {
        auto I = propagate_1d(profile, L);
        for (double v : I)
            if (!(v > 0.0))
                throw NumericalError("distance_series: intensity not positive at L = " + std::to_string(L));
        out.emplace_back(std::move(I), grid);
    }
    return out;
}

std::vector<double> spread_distances(double d_max, std::size_t count) {
    if (count < 2 || !(d_max > 0.0))
        throw InputError("spread_distances: need count >= 2 and d_max > 0");
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double mm = 4.0 + (282.0 - 4.0) * static_cast<double>(k) / static_cast<double>(count - 1);
        out[k] = mm * d_max / 282.0;
    }
    return out;
}

Slice disk_phantom_2d(const Grid2D& grid, const std::vector<Disk>& disks) {
    Slice s{Array2D(grid.rows, grid.cols), grid, 0.5 * static_cast<double>(std::min(grid.rows, grid.cols)) * grid.delta};
    const Grid1D ra = grid.row_axis();
    const Grid1D ca = grid.col_axis();
    for (const Disk& d : disks) {
        const double r2 = d.radius * d.radius;
        for (std::size_t r = 0; r < grid.rows; ++r) {
            const double dy = ra.coordinate(r) - d.y;
            for (std::size_t c = 0; c < grid.cols; ++c) {
                const double dx = ca.coordinate(c) - d.x;
                if (dx * dx + dy * dy <= r2)
                    s.data(r, c) += d.value;
            }
        }
    }
    return s;
}

Array2D gaussian_bumps(const Grid2D& grid, const std::vector<Bump>& bumps) {
    Array2D out(grid.rows, grid.cols);
    const Grid1D ra = grid.row_axis();
    const Grid1D ca = grid.col_axis();
    for (const Bump& b : bumps) {
        const double inv = 1.0 / (2.0 * b.width * b.width);
        for (std::size_t r = 0; r < grid.rows; ++r) {
            const double dy = ra.coordinate(r) - b.y;
            for (std::size_t c = 0; c < grid.cols; ++c) {
                const double dx = ca.coordinate(c) - b.x;
                out(r, c) += b.amplitude * std::exp(-(dx * dx + dy * dy) * inv);
            }
        }
    }
    return out;
}

Array2D soft_disks(const Grid2D& grid, const std::vector<Disk>& disks, double edge) {
    if (!(edge > 0.0))
        throw InputError("soft_disks: edge width must be positive");
    Array2D out(grid.rows, grid.cols);
    const Grid1D ra = grid.row_axis();
    const Grid1D ca = grid.col_axis();
    for (const Disk& d : disks)
        for (std::size_t r = 0; r < grid.rows; ++r) {
            const double dy = ra.coordinate(r) - d.y;
            for (std::size_t c = 0; c < grid.cols; ++c) {
                const double dx = ca.coordinate(c) - d.x;
                out(r, c) += d.value * 0.5 * (1.0 - std::tanh((std::hypot(dx, dy) - d.radius) / edge));
            }
        }
    return out;
}

void add_noise(std::vector<double>& values, double relative_sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, relative_sigma);
    for (auto& v : values)
        v = std::max(v * (1.0 + normal(rng)), 1e-12);
}

} // namespace phasereg
