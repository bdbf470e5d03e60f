#include "doctest.h"
#include "helpers.hpp"

#include "phasereg/errors.hpp"
#include "phasereg/fft.hpp"
#include "phasereg/filters.hpp"
#include "phasereg/kernels.hpp"
#include "phasereg/simulate.hpp"
#include "phasereg/spectral.hpp"
#include "phasereg/tomo.hpp"

using namespace phasereg;
using testutil::pi;

namespace {

Frame constant_frame(std::size_t n, double value) {
    return Frame(Array2D(n, n, value), Grid2D(n, n, 0.05));
}

Frame random_frame(std::mt19937_64& rng, std::size_t n = 64, double delta = 4.0 / 64.0) {
    const Grid2D g(n, n, delta);
    Array2D p = testutil::smooth_field(g, rng, 0.15);
    for (auto& v : p.values())
        v = std::exp(-(0.4 + 0.3 * v));
    return Frame(std::move(p), g);
}

Array2D roll(const Array2D& a, std::size_t dr, std::size_t dc) {
    Array2D out(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            out((r + dr) % a.rows(), (c + dc) % a.cols()) = a(r, c);
    return out;
}

}  // namespace

TEST_CASE("filter_frame on constant and identity") {
    set_warnings_enabled(false);
    const Frame f = constant_frame(32, std::exp(-1.0));
    for (double ell : {0.0, 1e-3, 0.5}) {
        const auto p = filter_frame(f, ell, CutoffMask::full());
        for (double v : p.data.values())
            CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
    }
    std::mt19937_64 rng(21);
    const Frame r = random_frame(rng);
    const auto p = filter_frame(r, 0.0, CutoffMask::full());
    double worst = 0.0;
    for (std::size_t i = 0; i < p.data.size(); ++i)
        worst = std::max(worst, std::abs(p.data.values()[i] + std::log(r.data.values()[i])));
    CHECK(worst <= 1e-10);
    CHECK(p.provenance.ell == 0.0);
    CHECK_THROWS_AS(filter_frame(r, -1e-3, CutoffMask::full()), InputError);
    CHECK_THROWS_AS(filter_frame(r, 1e-3, CutoffMask::full(), 0.0), InputError);
}

TEST_CASE("filter_frame halves a unit-frequency cosine") {
    const std::size_t n = 64;
    const Grid2D g(n, n, 1.0 / 16.0);  // window length 4, so |k| = 1 is on grid
    Array2D data(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const double y1 = (static_cast<double>(c) - n / 2.0) * g.delta;
            data(r, c) = std::exp(-(0.5 + 0.1 * std::cos(2 * pi * y1)));
        }
    const Frame f(data, g);
    const Array2D u = smooth_frame(f, 1.0 / (4 * pi * pi), CutoffMask::full());
    // DFT coefficient oracle at column frequency index 4 (= 1 cycle per unit).
    auto coeff = [&](const Array2D& a) {
        Complex s(0.0, 0.0);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                s += a(r, c) * std::polar(1.0, -2.0 * pi * 4.0 * static_cast<double>(c) / n);
        return s;
    };
    const Complex before = coeff(data), after = coeff(u);
    CHECK(std::abs(after - 0.5 * before) <= 1e-12 * std::abs(before));
}

TEST_CASE("filter_sinogram identity, eigenfunction and mass") {
    const Grid1D t(128, 1.0 / 32.0);
    const auto angles = uniform_angles(6);
    Array2D rows(6, 128);
    const double sigma0 = 3.0 / (128 / 32.0);
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = 0; c < 128; ++c)
            rows(r, c) = std::cos(2 * pi * sigma0 * t.coordinate(c) * double(r + 1));
    const Sinogram g(rows, t, angles);
    CHECK(testutil::max_abs_diff(filter_sinogram(g, 0.0, CutoffMask::full()).data, rows) <= 1e-10);
    const double ell = 2e-3;
    const auto p = filter_sinogram(g, ell, CutoffMask::full());
    for (std::size_t r = 0; r < 6; ++r) {
        const double s = sigma0 * double(r + 1);
        const double gain = 1.0 / (1.0 + 4 * pi * pi * ell * s * s);
        for (std::size_t c = 0; c < 128; ++c)
            CHECK(p.data(r, c) == doctest::Approx(gain * rows(r, c)).epsilon(1e-10).scale(1.0));
    }

    const Grid2D sg(64, 64, 2.0 / 64.0);
    const Slice disk = disk_phantom_2d(sg, {{0.1, -0.05, 0.5, 1.0}});
    const Sinogram dg = radon(disk, uniform_angles(30), Grid1D(96, 2.0 * std::sqrt(2.0) / 94.0));
    const auto dp = filter_sinogram(dg, 1e-3, CutoffMask::full());
    for (std::size_t r = 0; r < 30; ++r) {
        double mg = 0.0, mp = 0.0;
        for (std::size_t c = 0; c < 96; ++c) {
            mg += dg.data(r, c) * dg.t_grid.delta;
            mp += dp.data(r, c) * dg.t_grid.delta;
        }
        CHECK(mp == doctest::Approx(mg).epsilon(1e-9));
    }
}

TEST_CASE("delta_field limits and bound") {
    set_warnings_enabled(false);
    std::mt19937_64 rng(31);
    const Frame f = random_frame(rng);
    const auto d0 = delta_field(f, 0.0);
    CHECK(d0.max_abs <= 1e-10);
    const auto dc = delta_field(constant_frame(32, std::exp(-1.0)), 0.1);
    CHECK(dc.max_abs <= 1e-12);

    const Grid2D g(128, 128, 4.0 / 128);
    const Array2D p = soft_disks(g, {{0.2, -0.3, 0.8, 0.5}, {-0.6, 0.5, 0.4, 0.8}}, 0.05);
    const Frame sd = propagate_2d(p, g, 4e-4);
    const auto d = delta_field(sd, 4e-4);
    MESSAGE("soft-disk frame: max|delta| = " << d.max_abs << ", bound = " << d.bound);
    CHECK(d.bound_holds);
    CHECK(d.max_abs <= d.bound);
    double ln_norm = 0.0;
    for (double v : sd.data.values())
        ln_norm += std::log(v) * std::log(v) * g.cell_area();
    CHECK(d.bound == doctest::Approx(2.0 * std::sqrt(ln_norm) / (1.0 + 4 * pi * pi * 4e-4)).epsilon(1e-12));
}

TEST_CASE("Lipschitz transfer of the exponential") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const Array2D p = testutil::random_field(16, 16, rng, 0.0, 3.0);
        const Array2D q = testutil::random_field(16, 16, rng, 0.0, 3.0);
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double a = p.values()[i], b = q.values()[i];
            lhs += (std::exp(-a) - std::exp(-b)) * (std::exp(-a) - std::exp(-b));
            rhs += (a - b) * (a - b);
        }
        CHECK(lhs <= rhs);
    }
}

TEST_CASE("DC preservation, smoothing monotonicity and translation covariance") {
    set_warnings_enabled(false);
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 5; ++trial) {
        const Frame f = random_frame(rng, 48, 0.08);
        double mean_f = 0.0;
        for (double v : f.data.values())
            mean_f += v;
        mean_f /= static_cast<double>(f.data.size());

        double prev = std::numeric_limits<double>::infinity();
        for (double ell : {0.0, 1e-4, 1e-3, 1e-2, 1e-1}) {
            const Array2D u = smooth_frame(f, ell, CutoffMask::full());
            double mean_u = 0.0;
            for (double v : u.values())
                mean_u += v;
            mean_u /= static_cast<double>(u.size());
            CHECK(mean_u == doctest::Approx(mean_f).epsilon(1e-10));
            const Array2D lap = laplacian(u, f.grid);
            const double norm = l2_norm_squared(lap.values(), f.grid.cell_area());
            CHECK(norm <= prev * (1.0 + 1e-12));
            prev = norm;
        }

        const Frame shifted(roll(f.data, 5, 11), f.grid);
        const auto a = filter_frame(shifted, 2e-3, CutoffMask(0.6, f.grid.delta));
        const auto b = roll(filter_frame(f, 2e-3, CutoffMask(0.6, f.grid.delta)).data, 5, 11);
        CHECK(testutil::max_abs_diff(a.data, b) <= 1e-10);

        const Sinogram g(f.data, f.grid.col_axis(), uniform_angles(f.grid.rows));
        const Sinogram gs(roll(f.data, 0, 7), f.grid.col_axis(), uniform_angles(f.grid.rows));
        const auto pa = filter_sinogram(gs, 5e-3, CutoffMask::full());
        const auto pb = roll(filter_sinogram(g, 5e-3, CutoffMask::full()).data, 0, 7);
        CHECK(testutil::max_abs_diff(pa.data, pb) <= 1e-10);
    }
}

TEST_CASE("retrieve_signal modes") {
    set_warnings_enabled(false);
    const Grid1D g(256, 1.0 / 32.0);
    std::vector<double> f(256);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = std::exp(-0.3 - 0.1 * std::exp(-g.coordinate(i) * g.coordinate(i)));
    const Signal1D s(f, g);
    const auto a = retrieve_signal(s, 0.0, CutoffMask::full(), Mode::Frame);
    const auto b = retrieve_signal(s, 0.0, CutoffMask::full(), Mode::Slice);
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(a[i] == doctest::Approx(-std::log(f[i])).epsilon(1e-12));
        CHECK(b[i] == doctest::Approx(-std::log(f[i])).epsilon(1e-12));
    }
    const auto c = retrieve_signal(s, 1e-2, CutoffMask::full(), Mode::Frame, 2.0);
    const auto d = retrieve_signal(s, 1e-2, CutoffMask::full(), Mode::Frame, 1.0);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(c[i] == doctest::Approx(2.0 * d[i]).epsilon(1e-14));
}

TEST_CASE("invalid frames") {
    Array2D bad(4, 4, 0.5);
    bad(1, 2) = 0.0;
    CHECK_THROWS_AS(Frame(bad, Grid2D(4, 4, 0.1)), InputError);
    bad(1, 2) = std::nan("");
    CHECK_THROWS_AS(Frame(bad, Grid2D(4, 4, 0.1)), InputError);
    CHECK_THROWS_AS(Frame(Array2D(4, 4, 0.5), Grid2D(4, 5, 0.1)), InputError);
    CHECK_NOTHROW(Frame(Array2D(4, 4, 1.5), Grid2D(4, 4, 0.1)));
}
