#include "phasereg/tomo.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "phasereg/fft.hpp"
#include "phasereg/kernels.hpp"
#include "phasereg/parallel.hpp"

namespace phasereg {

namespace {

constexpr double kPi = std::numbers::pi;

// Bilinear sample at fractional (row, col); zero outside the array.
double bilinear(const Array2D& a, double fr, double fc) {
    const double r0f = std::floor(fr);
    const double c0f = std::floor(fc);
    const auto r0 = static_cast<long>(r0f);
    const auto c0 = static_cast<long>(c0f);
    const double wr = fr - r0f;
    const double wc = fc - c0f;
    const long rows = static_cast<long>(a.rows());
    const long cols = static_cast<long>(a.cols());
    double acc = 0.0;
    for (int dr = 0; dr < 2; ++dr) {
        const long r = r0 + dr;
        if (r < 0 || r >= rows)
            continue;
        const double w_r = dr ? wr : 1.0 - wr;
        for (int dc = 0; dc < 2; ++dc) {
            const long c = c0 + dc;
            if (c < 0 || c >= cols)
                continue;
            acc += w_r * (dc ? wc : 1.0 - wc) * a(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
    }
    return acc;
}

// Linear sample of one row at fractional index; zero outside.
double linear(std::span<const double> row, double u) {
    const double i0f = std::floor(u);
    const auto i0 = static_cast<long>(i0f);
    const double w = u - i0f;
    const long n = static_cast<long>(row.size());
    double acc = 0.0;
    if (i0 >= 0 && i0 < n)
        acc += (1.0 - w) * row[static_cast<std::size_t>(i0)];
    if (i0 + 1 >= 0 && i0 + 1 < n)
        acc += w * row[static_cast<std::size_t>(i0 + 1)];
    return acc;
}

std::size_t wrap_index(long k, std::size_t n) {
    const long nn = static_cast<long>(n);
    return static_cast<std::size_t>(((k % nn) + nn) % nn);
}

// Continuous Fourier transform of every row, sampled at sigma_k = k / (P dt),
// k = -P/2 .. P/2 - 1 (centred order), with rows zero-padded to P samples.
ComplexArray2D row_spectra_centred(const Sinogram& g, std::size_t P) {
    const std::size_t nt = g.t_grid.n;
    ComplexArray2D spec(g.data.rows(), P);
    for (std::size_t r = 0; r < g.data.rows(); ++r)
        for (std::size_t i = 0; i < nt; ++i) {
            const long offset = static_cast<long>(i) - static_cast<long>(nt / 2);
            spec(r, wrap_index(offset, P)) = g.data(r, i);
        }
    fft_rows_inplace(spec, Direction::Forward);
    const double scale = std::sqrt(static_cast<double>(P)) * g.t_grid.delta;
    ComplexArray2D centred(g.data.rows(), P);
    for (std::size_t r = 0; r < spec.rows(); ++r)
        for (std::size_t k = 0; k < P; ++k)
            centred(r, k) = scale * spec(r, wrap_index(static_cast<long>(k) - static_cast<long>(P / 2), P));
    return centred;
}

void check_out_grid(const Grid2D& grid) {
    if (grid.rows == 0 || grid.cols == 0 || !(grid.delta > 0.0))
        throw InputError("tomo: invalid output grid");
}

Slice make_slice(Array2D data, const Grid2D& grid) {
    const double fov = 0.5 * static_cast<double>(std::min(grid.rows, grid.cols)) * grid.delta;
    return {std::move(data), grid, fov};
}

Slice bst_core(const Sinogram& g, const Grid2D& out_grid, const BstOptions& options,
               const std::function<double(double)>& row_weight) {
    check_out_grid(out_grid);
    if (!g.uniform_angles())
        throw InputError("backproject_bst: angles must be uniformly spaced j*pi/n");
    if (options.oversampling < 1 || options.row_padding < 1)
        throw InputError("backproject_bst: oversampling and row padding must be >= 1");
    const std::size_t na = g.angles.size();
    const std::size_t P = static_cast<std::size_t>(options.row_padding) * g.t_grid.n;
    const double dsigma = 1.0 / (static_cast<double>(P) * g.t_grid.delta);

    // Polar samples, with an extra theta = pi row equal to theta = 0 at -sigma.
    ComplexArray2D polar = row_spectra_centred(g, P);
    ComplexArray2D ext(na + 1, P);
    for (std::size_t r = 0; r < na; ++r)
        for (std::size_t k = 0; k < P; ++k)
            ext(r, k) = polar(r, k);
    for (std::size_t k = 0; k < P; ++k)
        ext(na, k) = polar(0, wrap_index(static_cast<long>(P) - static_cast<long>(k), P));
    for (std::size_t r = 0; r <= na; ++r)
        for (std::size_t k = 0; k < P; ++k) {
            const double sigma = (static_cast<double>(k) - static_cast<double>(P / 2)) * dsigma;
            ext(r, k) *= k == P / 2 ? 0.0 : row_weight(sigma) / std::abs(sigma);
        }

    const std::size_t M = static_cast<std::size_t>(options.oversampling) * std::max(out_grid.rows, out_grid.cols);
    const double domega = 1.0 / (static_cast<double>(M) * out_grid.delta);
    const double dtheta = kPi / static_cast<double>(na);
    ComplexArray2D cart(M, M);
    parallel_for(M, [&](std::size_t r) {
        const double w2 = static_cast<double>(r < (M + 1) / 2 ? static_cast<long>(r) : static_cast<long>(r) - static_cast<long>(M)) * domega;
        for (std::size_t c = 0; c < M; ++c) {
            const double w1 = static_cast<double>(c < (M + 1) / 2 ? static_cast<long>(c) : static_cast<long>(c) - static_cast<long>(M)) * domega;
            double rho = std::hypot(w1, w2);
            double phi = std::atan2(w2, w1);
            if (phi < 0.0) {
                phi += kPi;
                rho = -rho;
            }
            const double ti = phi / dtheta;
            const double si = rho / dsigma + static_cast<double>(P / 2);
            const auto t0 = static_cast<std::size_t>(std::min(std::floor(ti), static_cast<double>(na - 1)));
            const double wt = ti - static_cast<double>(t0);
            const double s0f = std::floor(si);
            if (s0f < 0.0 || s0f + 1.0 > static_cast<double>(P - 1)) {
                cart(r, c) = 0.0;
                continue;
            }
            const auto s0 = static_cast<std::size_t>(s0f);
            const double ws = si - s0f;
            cart(r, c) = (1.0 - wt) * ((1.0 - ws) * ext(t0, s0) + ws * ext(t0, s0 + 1)) +
                         wt * ((1.0 - ws) * ext(t0 + 1, s0) + ws * ext(t0 + 1, s0 + 1));
        }
    });
    fft2_inplace(cart, Direction::Inverse);
    const double scale = static_cast<double>(M) * domega * domega;

    Array2D out(out_grid.rows, out_grid.cols);
    for (std::size_t r = 0; r < out_grid.rows; ++r) {
        const std::size_t rr = wrap_index(static_cast<long>(r) - static_cast<long>(out_grid.rows / 2), M);
        for (std::size_t c = 0; c < out_grid.cols; ++c) {
            const std::size_t cc = wrap_index(static_cast<long>(c) - static_cast<long>(out_grid.cols / 2), M);
            out(r, c) = scale * cart(rr, cc).real();
        }
    }
    return make_slice(std::move(out), out_grid);
}

} // namespace

std::vector<double> angle_weights(const std::vector<double>& angles) {
    const std::size_t n = angles.size();
    if (n == 0)
        throw InputError("angle_weights: empty angle set");
    if (n == 1)
        return {kPi};
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double prev = j == 0 ? angles[n - 1] - kPi : angles[j - 1];
        const double next = j + 1 == n ? angles[0] + kPi : angles[j + 1];
        w[j] = 0.5 * (next - prev);
    }
    return w;
}

Sinogram radon(const Slice& s, const std::vector<double>& angles, const Grid1D& t_grid) {
    if (angles.empty())
        throw InputError("radon: empty angle set");
    const Grid2D& grid = s.grid;
    const double half_diag = 0.5 * std::hypot(static_cast<double>(grid.rows), static_cast<double>(grid.cols)) * grid.delta;
    if (0.5 * t_grid.length() < half_diag * 0.999)
        warn("radon: t grid does not span the slice diagonal");
    const double step = 0.5 * grid.delta;
    const auto steps = static_cast<std::size_t>(std::ceil(2.0 * half_diag / step)) + 1;
    const double r_off = static_cast<double>(grid.rows / 2);
    const double c_off = static_cast<double>(grid.cols / 2);

    Array2D data(angles.size(), t_grid.n);
    parallel_for(angles.size(), [&](std::size_t a) {
        const double ct = std::cos(angles[a]);
        const double st = std::sin(angles[a]);
        for (std::size_t i = 0; i < t_grid.n; ++i) {
            const double t = t_grid.coordinate(i);
            double acc = 0.0;
            for (std::size_t k = 0; k < steps; ++k) {
                const double u = (static_cast<double>(k) - 0.5 * static_cast<double>(steps - 1)) * step;
                const double x = t * ct - u * st;
                const double y = t * st + u * ct;
                acc += bilinear(s.data, y / grid.delta + r_off, x / grid.delta + c_off);
            }
            data(a, i) = acc * step;
        }
    });
    Sinogram out;
    out.data = std::move(data);
    out.t_grid = t_grid;
    out.angles = angles;
    return out;
}

Slice backproject_direct(const Sinogram& g, const Grid2D& out_grid) {
    check_out_grid(out_grid);
    const std::size_t na = g.angles.size();
    const std::vector<double> w = angle_weights(g.angles);
    std::vector<double> ct(na), st(na);
    for (std::size_t a = 0; a < na; ++a) {
        ct[a] = std::cos(g.angles[a]);
        st[a] = std::sin(g.angles[a]);
    }
    const Grid1D ra = out_grid.row_axis();
    const Grid1D ca = out_grid.col_axis();
    const double t_off = static_cast<double>(g.t_grid.n / 2);
    const double inv_dt = 1.0 / g.t_grid.delta;
    Array2D out(out_grid.rows, out_grid.cols);
    parallel_for(out_grid.rows, [&](std::size_t r) {
        const double y = ra.coordinate(r);
        for (std::size_t c = 0; c < out_grid.cols; ++c) {
            const double x = ca.coordinate(c);
            double acc = 0.0;
            for (std::size_t a = 0; a < na; ++a)
                acc += w[a] * linear(g.data.row(a), (x * ct[a] + y * st[a]) * inv_dt + t_off);
            out(r, c) = acc;
        }
    });
    return make_slice(std::move(out), out_grid);
}

Slice backproject_bst(const Sinogram& g, const Grid2D& out_grid, const BstOptions& options) {
    return bst_core(g, out_grid, options, [](double) { return 1.0; });
}

Slice recon_fbp(const Sinogram& g, double ell, const Grid2D& out_grid, const CutoffMask& mask, Backprojector backend,
                const BstOptions& options) {
    if (!(ell >= 0.0) || !std::isfinite(ell))
        throw InputError("recon_fbp: ell must be finite and nonnegative");
    if (backend == Backprojector::Bst)
        return bst_core(g, out_grid, options, [&](double s) {
            return mask.admits(s) ? reg_ramp_hat(s, ell) : 0.0;
        });

    const std::size_t nt = g.t_grid.n;
    const std::size_t P = 2 * nt;
    const Grid1D padded(P, g.t_grid.delta);
    ComplexArray2D rows(g.data.rows(), P);
    for (std::size_t r = 0; r < g.data.rows(); ++r)
        for (std::size_t i = 0; i < nt; ++i)
            rows(r, i) = g.data(r, i);
    fft_rows_inplace(rows, Direction::Forward);
    std::vector<double> weight(P);
    for (std::size_t k = 0; k < P; ++k) {
        const double s = padded.frequency(k);
        weight[k] = mask.admits(s) ? reg_ramp_hat(s, ell) : 0.0;
    }
    for (std::size_t r = 0; r < rows.rows(); ++r)
        for (std::size_t k = 0; k < P; ++k)
            rows(r, k) *= weight[k];
    fft_rows_inplace(rows, Direction::Inverse);
    Sinogram filtered = g;
    for (std::size_t r = 0; r < g.data.rows(); ++r)
        for (std::size_t i = 0; i < nt; ++i)
            filtered.data(r, i) = rows(r, i).real();
    return backproject_direct(filtered, out_grid);
}

} // namespace phasereg
