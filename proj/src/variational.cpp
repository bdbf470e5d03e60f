#include "phasereg/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "phasereg/fft.hpp"
#include "phasereg/spectral.hpp"

namespace phasereg {

namespace {

constexpr double kFourPi2 = 4.0 * std::numbers::pi * std::numbers::pi;

Array2D exp_neg(const Array2D& p) {
    Array2D u(p.rows(), p.cols());
    for (std::size_t i = 0; i < p.size(); ++i)
        u.values()[i] = std::exp(-p.values()[i]);
    return u;
}

void check_shape(const Array2D& a, const Grid2D& grid, const char* what) {
    if (a.rows() != grid.rows || a.cols() != grid.cols)
        throw InputError(std::string(what) + ": array shape does not match grid");
}

Array2D axpy(const Array2D& p, double eps, const Array2D& v) {
    Array2D out = p;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values()[i] += eps * v.values()[i];
    return out;
}

double max_abs(const Array2D& a) {
    double m = 0.0;
    for (double v : a.values())
        m = std::max(m, std::abs(v));
    return m;
}

double sinogram_cell(const Sinogram& g) {
    return g.t_grid.delta * std::numbers::pi / static_cast<double>(g.angles.size());
}

// sum over rows of sum_k 4 pi^2 sigma_k^2 |p_k|^2 (unitary), times cell.
double row_gradient_energy(const Array2D& p, const Grid1D& t_grid, double cell) {
    ComplexArray2D spec = to_complex(p);
    fft_rows_inplace(spec, Direction::Forward);
    double sum = 0.0;
    for (std::size_t r = 0; r < spec.rows(); ++r)
        for (std::size_t c = 0; c < spec.cols(); ++c) {
            const double s = t_grid.frequency(c);
            sum += kFourPi2 * s * s * std::norm(spec(r, c));
        }
    return sum * cell;
}

FunctionalReport make_report(double value, double analytic, double fd) {
    return {value, analytic, fd, std::abs(analytic - fd) / std::max(std::abs(fd), 1e-30)};
}

} // namespace

double inner(const Array2D& a, const Array2D& b, double cell) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        sum += a.values()[i] * b.values()[i];
    return sum * cell;
}

double eval_E(const Array2D& p, const Array2D& g, const Grid2D& grid) {
    check_shape(p, grid, "eval_E");
    check_shape(g, grid, "eval_E");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double r = std::exp(-p.values()[i]) - std::exp(-g.values()[i]);
        sum += r * r;
    }
    return sum * grid.cell_area();
}

double eval_R(const Array2D& p, const Grid2D& grid) {
    check_shape(p, grid, "eval_R");
    const ComplexArray2D spec = fft2(exp_neg(p));
    const Grid1D ra = grid.row_axis();
    const Grid1D ca = grid.col_axis();
    double sum = 0.0;
    for (std::size_t r = 0; r < grid.rows; ++r) {
        const double q2 = ra.frequency(r);
        for (std::size_t c = 0; c < grid.cols; ++c) {
            const double q1 = ca.frequency(c);
            sum += kFourPi2 * (q1 * q1 + q2 * q2) * std::norm(spec(r, c));
        }
    }
    return sum * grid.cell_area();
}

double eval_R_finite_difference(const Array2D& p, const Grid2D& grid) {
    check_shape(p, grid, "eval_R_finite_difference");
    const Array2D u = exp_neg(p);
    double sum = 0.0;
    for (std::size_t r = 0; r < grid.rows; ++r)
        for (std::size_t c = 0; c < grid.cols; ++c) {
            const double dx = (u(r, (c + 1) % grid.cols) - u(r, c)) / grid.delta;
            const double dy = (u((r + 1) % grid.rows, c) - u(r, c)) / grid.delta;
            sum += dx * dx + dy * dy;
        }
    return sum * grid.cell_area();
}

double eval_H(const Array2D& p, const Frame& f, double ell) {
    if (!(ell >= 0.0))
        throw InputError("eval_H: ell must be nonnegative");
    check_shape(p, f.grid, "eval_H");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double r = std::exp(-p.values()[i]) - f.data.values()[i];
        sum += r * r;
    }
    const double data_term = sum * f.grid.cell_area();
    return ell == 0.0 ? data_term : data_term + ell * eval_R(p, f.grid);
}

double eval_V(const Array2D& p, const Sinogram& g, double ell) {
    if (!(ell >= 0.0))
        throw InputError("eval_V: ell must be nonnegative");
    if (p.rows() != g.data.rows() || p.cols() != g.data.cols())
        throw InputError("eval_V: shape mismatch");
    const double cell = sinogram_cell(g);
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double r = p.values()[i] - g.data.values()[i];
        sum += r * r;
    }
    return sum * cell + (ell == 0.0 ? 0.0 : ell * row_gradient_energy(p, g.t_grid, cell));
}

double derivative_E(const Array2D& p, const Array2D& g, const Grid2D& grid, const Array2D& h) {
    check_shape(h, grid, "derivative_E");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double u = std::exp(-p.values()[i]);
        sum += u * (std::exp(-g.values()[i]) - u) * h.values()[i];
    }
    return 2.0 * sum * grid.cell_area();
}

double derivative_R(const Array2D& p, const Grid2D& grid, const Array2D& h) {
    check_shape(h, grid, "derivative_R");
    const Array2D u = exp_neg(p);
    const Array2D lap = laplacian(u, grid);
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        sum += u.values()[i] * lap.values()[i] * h.values()[i];
    return 2.0 * sum * grid.cell_area();
}

double derivative_H(const Array2D& p, const Frame& f, double ell, const Array2D& h) {
    check_shape(p, f.grid, "derivative_H");
    check_shape(h, f.grid, "derivative_H");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double u = std::exp(-p.values()[i]);
        sum += u * (f.data.values()[i] - u) * h.values()[i];
    }
    const double data_term = 2.0 * sum * f.grid.cell_area();
    return ell == 0.0 ? data_term : data_term + ell * derivative_R(p, f.grid, h);
}

std::vector<FunctionalReport> frechet_check_E(const Array2D& p, const Array2D& g, const Grid2D& grid,
                                              const std::vector<Array2D>& directions) {
    const double eps = 1e-5 * (1.0 + max_abs(p));
    const double value = eval_E(p, g, grid);
    std::vector<FunctionalReport> out;
    for (const Array2D& h : directions) {
        const double fd = (eval_E(axpy(p, eps, h), g, grid) - eval_E(axpy(p, -eps, h), g, grid)) / (2.0 * eps);
        out.push_back(make_report(value, derivative_E(p, g, grid, h), fd));
    }
    return out;
}

std::vector<FunctionalReport> frechet_check_R(const Array2D& p, const Grid2D& grid,
                                              const std::vector<Array2D>& directions) {
    const double eps = 1e-5 * (1.0 + max_abs(p));
    const double value = eval_R(p, grid);
    std::vector<FunctionalReport> out;
    for (const Array2D& h : directions) {
        const double fd = (eval_R(axpy(p, eps, h), grid) - eval_R(axpy(p, -eps, h), grid)) / (2.0 * eps);
        out.push_back(make_report(value, derivative_R(p, grid, h), fd));
    }
    return out;
}

SecondOrderReport second_order_check(const Array2D& p_bar, const Frame& f, double ell,
                                     const std::vector<Array2D>& directions, double eps) {
    if (!(eps > 0.0))
        throw InputError("second_order_check: eps must be positive");
    const double h0 = eval_H(p_bar, f, ell);
    SecondOrderReport report;
    report.min_normalized = std::numeric_limits<double>::infinity();
    for (const Array2D& v : directions) {
        const double q = (eval_H(axpy(p_bar, eps, v), f, ell) - 2.0 * h0 + eval_H(axpy(p_bar, -eps, v), f, ell)) /
                         (eps * eps);
        const double vv = inner(v, v, f.grid.cell_area());
        report.quotients.push_back(q);
        if (vv > 0.0)
            report.min_normalized = std::min(report.min_normalized, q / vv);
        report.nonnegative = report.nonnegative && q >= -1e-6 * vv;
    }
    return report;
}

ExpansionCheck v_expansion_check(const Array2D& p_star, const Sinogram& g, double ell, const Array2D& v, double eps) {
    ExpansionCheck out;
    out.lhs = eval_V(axpy(p_star, eps, v), g, ell) - eval_V(p_star, g, ell);
    const double cell = sinogram_cell(g);
    out.rhs = eps * eps * (inner(v, v, cell) + ell * row_gradient_energy(v, g.t_grid, cell));
    out.rel_error = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.rhs), 1e-300);
    return out;
}

} // namespace phasereg
