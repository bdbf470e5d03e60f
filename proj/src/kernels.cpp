#include "phasereg/kernels.hpp"

#include <cmath>
#include <numbers>

namespace phasereg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPi2 = 4.0 * kPi * kPi;

void check_ell(double ell) {
    if (!(ell >= 0.0) || !std::isfinite(ell))
        throw InputError("kernel: ell must be finite and nonnegative");
}

} // namespace

double k_hat(double q1, double q2, double ell) {
    check_ell(ell);
    return 1.0 / (1.0 + kFourPi2 * ell * (q1 * q1 + q2 * q2));
}

double t_hat(double sigma, double ell) {
    check_ell(ell);
    return 1.0 / (1.0 + kFourPi2 * ell * (sigma * sigma));
}

double k_eps_hat(double q1, double q2, double ell, double epsilon) {
    check_ell(ell);
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw InputError("kernel: epsilon must lie in [0,1]");
    return 1.0 / (1.0 + kFourPi2 * ell * (q1 * q1 + epsilon * q2 * q2));
}

double deriv_kernel_from_symbol(double a, double ell, int order) {
    check_ell(ell);
    const double base = 1.0 / (1.0 + a * ell);
    switch (order) {
    case 0:
        return base;
    case 1:
        return -a * base * base;
    case 2:
        return 2.0 * a * a * base * base * base;
    default:
        throw InputError("kernel: derivative order must be 0, 1 or 2");
    }
}

double deriv_kernel_hat(double q_norm, double ell, int order) {
    return deriv_kernel_from_symbol(kFourPi2 * q_norm * q_norm, ell, order);
}

double generalized_y_hat(double sigma, double ell, double a1, double a2) {
    check_ell(ell);
    const double s2 = sigma * sigma;
    return 1.0 / (1.0 + kFourPi2 * ell * (a1 * a1 + 4.0 * s2 * a2 * a2) * s2);
}

double reg_ramp_hat(double sigma, double ell) {
    check_ell(ell);
    return std::abs(sigma) / (1.0 + kFourPi2 * ell * sigma * sigma);
}

double k_spatial(double radius, double ell) {
    if (!(ell > 0.0))
        throw InputError("k_spatial: ell must be positive");
    const double s = std::sqrt(ell);
    return kPi / s * std::exp(-2.0 * kPi * std::abs(radius) / s);
}

void KernelSpec::validate() const {
    check_ell(ell);
    if (family == KernelFamily::AnisoKEps && !(epsilon >= 0.0 && epsilon <= 1.0))
        throw InputError("kernel: epsilon must lie in [0,1]");
    if ((family == KernelFamily::DerivK || family == KernelFamily::DerivT) && (order < 0 || order > 2))
        throw InputError("kernel: derivative order must be 0, 1 or 2");
}

double KernelSpec::evaluate(double q1, double q2) const {
    switch (family) {
    case KernelFamily::FrameK:
        return k_hat(q1, q2, ell);
    case KernelFamily::SinoT:
        return t_hat(q1, ell);
    case KernelFamily::AnisoKEps:
        return k_eps_hat(q1, q2, ell, epsilon);
    case KernelFamily::DerivK:
        return deriv_kernel_hat(std::hypot(q1, q2), ell, order);
    case KernelFamily::DerivT:
        return deriv_kernel_hat(q1, ell, order);
    case KernelFamily::GeneralizedY:
        return generalized_y_hat(q1, ell, a1, a2);
    case KernelFamily::RegRamp:
        return reg_ramp_hat(q1, ell);
    }
    throw InputError("kernel: unknown family");
}

DenseKernel::DenseKernel(const KernelSpec& spec, const Grid2D& grid)
    : spec_(spec), rows_(grid.rows), cols_(grid.cols), values_(grid.rows * grid.cols) {
    spec_.validate();
    const Grid1D ra = grid.row_axis();
    const Grid1D ca = grid.col_axis();
    for (std::size_t r = 0; r < rows_; ++r) {
        const double q2 = ra.frequency(r);
        for (std::size_t c = 0; c < cols_; ++c)
            values_[r * cols_ + c] = spec_.evaluate(ca.frequency(c), q2);
    }
}

DenseKernel::DenseKernel(const KernelSpec& spec, const Grid1D& grid)
    : spec_(spec), rows_(1), cols_(grid.n), values_(grid.n) {
    spec_.validate();
    for (std::size_t c = 0; c < cols_; ++c)
        values_[c] = spec_.evaluate(grid.frequency(c), 0.0);
}

} // namespace phasereg
