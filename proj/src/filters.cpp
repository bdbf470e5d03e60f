#include "phasereg/filters.hpp"

#include <cmath>
#include <numbers>

#include "phasereg/kernels.hpp"
#include "phasereg/spectral.hpp"

namespace phasereg {

namespace {

void check_ell(double ell) {
    if (!(ell >= 0.0) || !std::isfinite(ell))
        throw InputError("filter: ell must be finite and nonnegative");
}

double neg_log_checked(double v, double c) {
    if (!(v > 0.0))
        throw NumericalError("filter: nonpositive value after filtering (mask too aggressive or invalid input)");
    return -c * std::log(v);
}

Array2D neg_log(const Array2D& a) {
    Array2D out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i)
        out.values()[i] = -std::log(a.values()[i]);
    return out;
}

} // namespace

Array2D smooth_frame(const Frame& f, double ell, const CutoffMask& mask) {
    check_ell(ell);
    return apply_multiplier(f.data, f.grid, [&](double q1, double q2) {
        return mask.admits(q1, q2) ? k_hat(q1, q2, ell) : 0.0;
    });
}

RetrievedMap filter_frame(const Frame& f, double ell, const CutoffMask& mask, double c) {
    if (!(c > 0.0))
        throw InputError("filter_frame: c must be positive");
    Array2D u = smooth_frame(f, ell, mask);
    for (auto& v : u.values())
        v = neg_log_checked(v, c);
    return {std::move(u), {Mode::Frame, ell, mask.m(), c}};
}

RetrievedMap filter_sinogram(const Sinogram& g, double ell, const CutoffMask& mask) {
    check_ell(ell);
    Array2D p = apply_multiplier_rows(g.data, g.t_grid, [&](double s) {
        return mask.admits(s) ? t_hat(s, ell) : 0.0;
    });
    return {std::move(p), {Mode::Slice, ell, mask.m(), 1.0}};
}

std::vector<double> retrieve_signal(const Signal1D& f, double ell, const CutoffMask& mask, Mode mode, double c) {
    check_ell(ell);
    if (!(c > 0.0))
        throw InputError("retrieve_signal: c must be positive");
    auto mult = [&](double s) { return mask.admits(s) ? t_hat(s, ell) : 0.0; };
    if (mode == Mode::Frame) {
        auto u = apply_multiplier(f.data, f.grid, mult);
        for (auto& v : u)
            v = neg_log_checked(v, c);
        return u;
    }
    std::vector<double> g(f.data.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = -c * std::log(f.data[i]);
    return apply_multiplier(g, f.grid, mult);
}

DeltaReport delta_field(const Frame& f, double ell, const CutoffMask& mask) {
    check_ell(ell);
    const Array2D g = neg_log(f.data);
    const Array2D slice_path = apply_multiplier_rows(g, f.grid.col_axis(), [&](double s) {
        return mask.admits(s) ? t_hat(s, ell) : 0.0;
    });
    const Array2D u = smooth_frame(f, ell, mask);

    DeltaReport report;
    report.delta = Array2D(f.grid.rows, f.grid.cols);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = u.values()[i];
        if (!(v > 0.0))
            throw NumericalError("delta_field: nonpositive value after filtering");
        const double d = slice_path.values()[i] + std::log(v);
        report.delta.values()[i] = d;
        report.max_abs = std::max(report.max_abs, std::abs(d));
    }
    const double norm = std::sqrt(l2_norm_squared(g.values(), f.grid.cell_area()));
    report.bound = 2.0 * norm / (1.0 + 4.0 * std::numbers::pi * std::numbers::pi * ell);
    report.bound_holds = report.max_abs <= report.bound;
    return report;
}

} // namespace phasereg
