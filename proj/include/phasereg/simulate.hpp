#pragma once

#include <cstdint>
#include <vector>

#include "phasereg/select.hpp"
#include "phasereg/types.hpp"

namespace phasereg {

struct Phantom1D {
    double w = 300.0;
    double n = 1e4;
    Grid1D grid;
};

// 32768 samples over [-16, 16): spacing 1/1024.
Grid1D default_line_grid();

struct RectProfile {
    std::vector<double> p;
    std::vector<double> dp;
    std::vector<double> d2p;
};

// p(t) = (s(t + 1/2) - s(t - 1/2)) / (2w), s(t) = t / sqrt(t^2 + 1/n).
RectProfile rect_phantom(const Phantom1D& ph);

// (L (p'' - p'^2) + 1) exp(-p).
std::vector<double> propagate_1d(const RectProfile& profile, double L);
// (-L d^2 + 1) exp(-p) applied in frequency.
std::vector<double> propagate_1d_spectral(const std::vector<double>& p, const Grid1D& grid, double L);
// (-L Lap + 1) exp(-p) applied in frequency; throws if the result is not positive.
Frame propagate_2d(const Array2D& p, const Grid2D& grid, double L);

struct DistanceSeries {
    std::vector<double> distances;
    PhysicalParams params;

    std::vector<double> L_values() const;
};

std::vector<Frame> distance_series(const Array2D& p, const Grid2D& grid, const DistanceSeries& series);
std::vector<Signal1D> distance_series(const RectProfile& profile, const Grid1D& grid, const DistanceSeries& series);
// 29 distances evenly spread over [4, 282] scaled so the last one is `d_max`.
std::vector<double> spread_distances(double d_max, std::size_t count = 29);

struct Disk {
    double x = 0.0;
    double y = 0.0;
    double radius = 0.0;
    double value = 0.0;
};

Slice disk_phantom_2d(const Grid2D& grid, const std::vector<Disk>& disks);

// Sum of Gaussian bumps amp * exp(-|x - c|^2 / (2 s^2)).
struct Bump {
    double x = 0.0;
    double y = 0.0;
    double width = 0.0;
    double amplitude = 0.0;
};
Array2D gaussian_bumps(const Grid2D& grid, const std::vector<Bump>& bumps);
// Smooth-edged disks: value * (1 - tanh((r - R) / edge)) / 2.
Array2D soft_disks(const Grid2D& grid, const std::vector<Disk>& disks, double edge);

// Multiplicative Gaussian noise, clipped to stay positive.
void add_noise(std::vector<double>& values, double relative_sigma, std::uint64_t seed);

} // namespace phasereg
