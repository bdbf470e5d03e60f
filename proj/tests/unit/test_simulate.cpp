#include "doctest.h"
#include "helpers.hpp"

#include "phasereg/errors.hpp"
#include "phasereg/filters.hpp"
#include "phasereg/select.hpp"
#include "phasereg/simulate.hpp"
#include "phasereg/spectral.hpp"

using namespace phasereg;
using testutil::pi;

namespace {
constexpr double kL = 0.0163522409163;
}

TEST_CASE("rect phantom values") {
    const Grid1D grid = default_line_grid();
    CHECK(grid.n == 32768);
    const RectProfile p = rect_phantom({300.0, 1e4, grid});
    const std::size_t mid = grid.n / 2;
    CHECK(grid.coordinate(mid) == 0.0);
    const double oracle = (1.0 / 300.0) * 0.5 / std::sqrt(0.25 + 1e-4);
    CHECK(p.p[mid] == doctest::Approx(oracle).epsilon(1e-13));
    CHECK(p.p[mid] == doctest::Approx(0.0033327).epsilon(1e-4));
    for (std::size_t j = 1; j < mid; ++j)
        CHECK(p.p[mid - j] == p.p[mid + j]);
    const std::size_t five = mid + 5 * 1024;
    CHECK(std::abs(p.p[five]) <= 1e-4 / 300.0);
    for (double v : p.p) {
        CHECK(v >= 0.0);
        CHECK(v <= (1.0 / 300.0) * (1.0 + 1e-9));
    }
    CHECK_THROWS_AS(rect_phantom({300.0, 1e4, Grid1D(64, 0.01)}), InputError);
    CHECK_THROWS_AS(rect_phantom({0.0, 1e4, grid}), InputError);
}

TEST_CASE("rect phantom analytic derivatives") {
    const Grid1D grid(8192, 1.0 / 2048.0);
    const RectProfile p = rect_phantom({300.0, 1e4, grid});
    for (std::size_t j = 1000; j + 1000 < grid.n; j += 97) {
        const double d1 = (p.p[j + 1] - p.p[j - 1]) / (2 * grid.delta);
        CHECK(std::abs(d1 - p.dp[j]) <= 1e-3 * (std::abs(p.dp[j]) + 1e-4));
        const double d2 = (p.dp[j + 1] - p.dp[j - 1]) / (2 * grid.delta);
        CHECK(std::abs(d2 - p.d2p[j]) <= 1e-2 * (std::abs(p.d2p[j]) + 1e-2));
    }
}

TEST_CASE("propagate_1d") {
    const Grid1D grid = default_line_grid();
    const RectProfile p = rect_phantom({300.0, 1e4, grid});
    const auto I0 = propagate_1d(p, 0.0);
    for (std::size_t j = 0; j < grid.n; ++j)
        CHECK(I0[j] == std::exp(-p.p[j]));

    const RectProfile flat{std::vector<double>(grid.n, 0.7), std::vector<double>(grid.n, 0.0),
                           std::vector<double>(grid.n, 0.0)};
    for (double v : propagate_1d(flat, 0.3))
        CHECK(v == doctest::Approx(std::exp(-0.7)).epsilon(1e-15));

    const auto chain = propagate_1d(p, kL);
    const auto spectral = propagate_1d_spectral(p.p, grid, kL);
    double worst = 0.0;
    for (std::size_t j = grid.n / 10; j < grid.n - grid.n / 10; ++j)
        worst = std::max(worst, std::abs(chain[j] - spectral[j]) / std::abs(spectral[j]));
    MESSAGE("chain rule vs spectral, interior: " << worst);
    CHECK(worst <= 1e-6);

    double peak = 0.0, trough = 2.0;
    for (double v : chain) {
        peak = std::max(peak, v);
        trough = std::min(trough, v);
    }
    CHECK(peak > 1.0);
    CHECK(trough < std::exp(-1.0 / 300.0));

    double m_i = 0.0, m_e = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        m_i += spectral[j];
        m_e += std::exp(-p.p[j]);
    }
    CHECK(m_i == doctest::Approx(m_e).epsilon(1e-10));
    CHECK_THROWS_AS(propagate_1d(p, -1.0), InputError);
}

TEST_CASE("propagate_2d round trip") {
    set_warnings_enabled(false);
    std::mt19937_64 rng(101);
    const Grid2D g(128, 128, 4.0 / 128);
    for (int trial = 0; trial < 3; ++trial) {
        Array2D p = testutil::smooth_field(g, rng, 0.1);
        for (auto& v : p.values())
            v = 0.3 + 0.1 * v;
        const Frame f0 = propagate_2d(p, g, 0.0);
        for (std::size_t i = 0; i < p.size(); ++i)
            CHECK(f0.data.values()[i] == doctest::Approx(std::exp(-p.values()[i])).epsilon(1e-13));
        const double L = 1e-3 * (trial + 1);
        const Frame f = propagate_2d(p, g, L);
        const auto back = filter_frame(f, L, CutoffMask::full());
        CHECK(testutil::max_abs_diff(back.data, p) <= 1e-8);
    }
}

TEST_CASE("propagate_2d positivity threshold on a Gaussian bump") {
    const Grid2D g(64, 64, 2.0 / 64);
    const Array2D p = gaussian_bumps(g, {{0.0, 0.0, 0.05, 1.0}});
    // f = u - L Lap u stays positive while L < min u / Lap u over points where Lap u > 0.
    double L_fail = 0.0;
    for (double L : log_space(1e-5, 1e-1, 41)) {
        try {
            (void)propagate_2d(p, g, L);
        } catch (const NumericalError&) {
            L_fail = L;
            break;
        }
    }
    MESSAGE("positivity first fails at L = " << L_fail);
    CHECK(L_fail > 0.0);
    const Array2D u = [&] {
        Array2D e = p;
        for (auto& v : e.values())
            v = std::exp(-v);
        return e;
    }();
    const Array2D lap = laplacian(u, g);
    double threshold = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i)
        if (lap.values()[i] > 0.0)
            threshold = std::min(threshold, u.values()[i] / lap.values()[i]);
    CHECK(L_fail >= threshold);
    CHECK(L_fail <= threshold * std::pow(10.0, 0.1) * (1.0 + 1e-12));
}

TEST_CASE("distance series") {
    set_warnings_enabled(false);
    const PhysicalParams pp{1.043e-6, 3.553e-10, 1.4e-10, 0.0};
    DistanceSeries two{{1e5, 2e5}, pp};
    const auto L2 = two.L_values();
    CHECK(L2[1] / L2[0] == doctest::Approx(2.0).epsilon(1e-15));

    const auto d = spread_distances(5e5);
    CHECK(d.size() == 29);
    CHECK(d.front() == doctest::Approx(4.0 * 5e5 / 282.0));
    CHECK(d.back() == doctest::Approx(5e5));

    const Grid2D g(64, 64, 4.0 / 64);
    const Array2D p = soft_disks(g, {{0.0, 0.0, 0.8, 0.3}}, 0.1);
    DistanceSeries series{d, pp};
    const auto frames = distance_series(p, g, series);
    REQUIRE(frames.size() == 29);
    double prev = 0.0;
    for (const auto& f : frames) {
        double grad = 0.0;
        for (std::size_t r = 0; r < 64; ++r)
            for (std::size_t c = 0; c + 1 < 64; ++c)
                grad = std::max(grad, std::abs(f.data(r, c + 1) - f.data(r, c)));
        CHECK(grad > prev);
        prev = grad;
    }
    CHECK_THROWS_AS(distance_series(p, g, DistanceSeries{{1.0}, pp}), InputError);
}

TEST_CASE("full pipeline on the 1D distance series at the calibrated cutoff" * doctest::may_fail()) {
    set_warnings_enabled(false);
    const Grid1D grid = default_line_grid();
    const DistanceSeries series{spread_distances(5e5), {1.043e-6, 3.553e-10, 1.4e-10, 5e5}};
    const auto frames = distance_series(rect_phantom({300.0, 1e4, grid}), grid, series);
    const auto L = series.L_values();
    FindEllOptions opt;
    opt.ell_lo = 1e-6;
    opt.ell_hi = 1.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < frames.size(); ++k) {
        const double ell = find_ell(frames[k], Mode::Frame, CutoffMask(0.0022886149, grid.delta), opt).argmax_ell;
        worst = std::max(worst, std::abs(ell - L[k]) / L[k]);
    }
    MESSAGE("max relative gap " << worst);
    CHECK(worst <= 0.10);
}

TEST_CASE("disk phantoms and noise") {
    const Grid2D g(256, 256, 2.0 / 256);
    const Slice empty = disk_phantom_2d(g, {});
    for (double v : empty.data.values())
        CHECK(v == 0.0);
    const Slice one = disk_phantom_2d(g, {{0.0, 0.0, 0.6, 1.0}});
    double area = 0.0;
    for (double v : one.data.values())
        area += v * g.cell_area();
    CHECK(area == doctest::Approx(pi * 0.36).epsilon(1e-2));
    const Slice two = disk_phantom_2d(g, {{-0.4, 0.0, 0.3, 1.0}, {0.4, 0.0, 0.3, 2.0}});
    for (double v : two.data.values())
        CHECK((v == 0.0 || v == 1.0 || v == 2.0));

    std::vector<double> a(1000, 0.5), b(1000, 0.5);
    add_noise(a, 0.01, 9);
    add_noise(b, 0.01, 9);
    CHECK(a == b);
    for (double v : a)
        CHECK(v > 0.0);
}
