#include "doctest.h"
#include "helpers.hpp"

#include "phasereg/errors.hpp"
#include "phasereg/fft.hpp"
#include "phasereg/kernels.hpp"

using namespace phasereg;
using testutil::pi;

TEST_CASE("k_hat and t_hat values") {
    CHECK(k_hat(0.0, 0.0, 3.0) == 1.0);
    CHECK(k_hat(2.0, -1.0, 0.0) == 1.0);
    CHECK(k_hat(1.0, 0.0, 1.0 / (4 * pi * pi)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(k_hat(0.6, 0.8, 1.0 / (4 * pi * pi)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t_hat(0.0, 5.0) == 1.0);
    CHECK(t_hat(7.0, 0.0) == 1.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> s(-50.0, 50.0), l(0.0, 0.1);
    for (int i = 0; i < 200; ++i) {
        const double sigma = s(rng), ell = l(rng);
        CHECK(t_hat(sigma, ell) == k_hat(sigma, 0.0, ell));
    }
    CHECK_THROWS_AS(k_hat(1.0, 1.0, -1e-3), InputError);
    CHECK_THROWS_AS(t_hat(1.0, -1.0), InputError);
}

TEST_CASE("k_eps_hat limits") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> s(-20.0, 20.0), l(0.0, 0.05);
    for (int i = 0; i < 200; ++i) {
        const double q1 = s(rng), q2 = s(rng), ell = l(rng);
        CHECK(k_eps_hat(q1, q2, ell, 1.0) == k_hat(q1, q2, ell));
        CHECK(k_eps_hat(q1, q2, ell, 0.0) == t_hat(q1, ell));
    }
    CHECK(k_eps_hat(1.0, 1.0, 1.0 / (4 * pi * pi), 0.5) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK_THROWS_AS(k_eps_hat(1.0, 1.0, 0.1, 1.5), InputError);
    CHECK_THROWS_AS(k_eps_hat(1.0, 1.0, 0.1, -0.1), InputError);
}

TEST_CASE("derivative kernels") {
    CHECK(deriv_kernel_from_symbol(1.0, 0.0, 1) == -1.0);
    CHECK(deriv_kernel_from_symbol(1.0, 0.0, 2) == 2.0);
    CHECK(deriv_kernel_hat(1.3, 0.02, 0) == doctest::Approx(k_hat(1.3, 0.0, 0.02)).epsilon(1e-15));
    CHECK_THROWS_AS(deriv_kernel_hat(1.0, 0.1, 3), InputError);

    for (double q : {0.1, 1.0, 5.0, 30.0}) {
        const double a = 4 * pi * pi * q * q;
        for (int k = 0; k <= 24; ++k) {
            const double ell = std::pow(10.0, -6.0 + 6.0 * k / 24.0);
            const double h = 1e-4 * ell;
            const double f1 = (deriv_kernel_hat(q, ell + h, 0) - deriv_kernel_hat(q, ell - h, 0)) / (2 * h);
            const double d1 = deriv_kernel_hat(q, ell, 1);
            CHECK(std::abs(f1 - d1) <= 1e-5 * std::abs(d1));
            const double f2 = (deriv_kernel_hat(q, ell + h, 1) - deriv_kernel_hat(q, ell - h, 1)) / (2 * h);
            const double d2 = deriv_kernel_hat(q, ell, 2);
            CHECK(std::abs(f2 - d2) <= 1e-5 * std::abs(d2));
            CHECK(deriv_kernel_from_symbol(a, ell, 1) == doctest::Approx(d1).epsilon(1e-13));
        }
    }
}

TEST_CASE("generalized_y_hat") {
    CHECK(generalized_y_hat(2.5, 0.01, 1.0, 0.0) == t_hat(2.5, 0.01));
    CHECK(generalized_y_hat(0.0, 0.3, 2.0, 3.0) == 1.0);
    CHECK(generalized_y_hat(1.0, 1.0 / (4 * pi * pi), 0.0, 1.0) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK_THROWS_AS(generalized_y_hat(1.0, -0.1, 1.0, 0.0), InputError);
}

TEST_CASE("reg_ramp_hat") {
    CHECK(reg_ramp_hat(0.0, 0.1) == 0.0);
    CHECK(reg_ramp_hat(-3.5, 0.0) == 3.5);
    for (double ell : {1e-4, 1e-3, 1e-2}) {
        const double s_star = 1.0 / (2 * pi * std::sqrt(ell));
        double best_s = 0.0, best_v = 0.0;
        for (int i = 1; i <= 200000; ++i) {
            const double s = 4.0 * s_star * i / 200000.0;
            const double v = reg_ramp_hat(s, ell);
            if (v > best_v) {
                best_v = v;
                best_s = s;
            }
        }
        CHECK(best_s == doctest::Approx(s_star).epsilon(1e-4));
        CHECK(reg_ramp_hat(s_star, ell) == doctest::Approx(1.0 / (4 * pi * std::sqrt(ell))).epsilon(1e-14));
        CHECK(reg_ramp_hat(1e8, ell) < 1e-4);
    }
}

TEST_CASE("k_spatial profile") {
    CHECK(k_spatial(0.0, 1.0) == doctest::Approx(pi));
    const double ell = 0.01;
    const double half = std::sqrt(ell) * std::log(2.0) / (2 * pi);
    CHECK(k_spatial(half, ell) == doctest::Approx(0.5 * k_spatial(0.0, ell)).epsilon(1e-14));
    CHECK(k_spatial(0.1, ell) < k_spatial(0.05, ell));
    CHECK_THROWS_AS(k_spatial(0.1, 0.0), InputError);
}

TEST_CASE("k_spatial is not the 2D inverse transform of k_hat") {
    const std::size_t n = 512;
    const double delta = 1.0 / 128.0, ell = 1e-3;
    const Grid2D grid(n, n, delta);
    const auto f = freq_axis(grid.col_axis());
    ComplexArray2D spec(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            spec(r, c) = k_hat(f[c], f[r], ell);
    // Continuous inverse transform: unitary inverse times n dq^2 = 1 / (n delta^2).
    const Array2D k = ifft2_real(spec);
    const double scale = 1.0 / (static_cast<double>(n) * delta * delta);
    // The exact 2D transform is K0(r / sqrt(ell)) / (2 pi ell).
    double worst = 0.0, worst_bessel = 0.0;
    for (std::size_t j = 2; j <= 8; ++j) {
        const double r = static_cast<double>(j) * delta;
        const double numeric = k(0, j) * scale;
        const double bessel = std::cyl_bessel_k(0.0, r / std::sqrt(ell)) / (2 * pi * ell);
        worst = std::max(worst, std::abs(numeric - k_spatial(r, ell)) / k_spatial(r, ell));
        worst_bessel = std::max(worst_bessel, std::abs(numeric - bessel) / bessel);
    }
    MESSAGE("FFT kernel vs exponential profile: " << worst << ", vs Bessel K0 form: " << worst_bessel);
    CHECK(worst_bessel < 0.05);
    CHECK(worst > 0.5);
}

TEST_CASE("DenseKernel and KernelSpec") {
    const Grid2D g(8, 6, 0.1);
    KernelSpec spec{KernelFamily::AnisoKEps, 0.01, 0.3, 0, 1.0, 0.0};
    const DenseKernel dk(spec, g);
    const auto f1 = freq_axis(g.col_axis());
    const auto f2 = freq_axis(g.row_axis());
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 6; ++c)
            CHECK(dk(r, c) == k_eps_hat(f1[c], f2[r], 0.01, 0.3));
    KernelSpec bad{KernelFamily::DerivK, 0.01, 1.0, 5, 1.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), InputError);
    KernelSpec neg{KernelFamily::SinoT, -1.0};
    CHECK_THROWS_AS(neg.validate(), InputError);
}

TEST_CASE("monotonicity") {
    for (double q : {0.5, 2.0, 10.0}) {
        double prev = 2.0;
        for (double ell : {0.0, 1e-4, 1e-3, 1e-2, 1e-1}) {
            const double v = k_hat(q, 0.0, ell);
            CHECK(v < prev);
            prev = v;
        }
    }
    double prev = 2.0;
    for (double q : {0.0, 0.5, 1.0, 5.0, 50.0}) {
        const double v = k_hat(q, q / 2, 0.01);
        CHECK(v < prev);
        prev = v;
    }
}
