#pragma once

#include <vector>

#include "phasereg/grid.hpp"

namespace phasereg {

// Frequency multipliers. ell has units of length^2; frequencies are cycles per length.
double k_hat(double q1, double q2, double ell);
double t_hat(double sigma, double ell);
double k_eps_hat(double q1, double q2, double ell, double epsilon);
// n-th derivative in ell of 1/(1 + a ell), a = 4 pi^2 |q|^2.
double deriv_kernel_hat(double q_norm, double ell, int order);
double deriv_kernel_from_symbol(double a, double ell, int order);
double generalized_y_hat(double sigma, double ell, double a1, double a2);
double reg_ramp_hat(double sigma, double ell);
// Radial exponential profile, diagnostic only.
double k_spatial(double radius, double ell);

enum class KernelFamily { FrameK, SinoT, AnisoKEps, DerivK, DerivT, GeneralizedY, RegRamp };

struct KernelSpec {
    KernelFamily family = KernelFamily::FrameK;
    double ell = 0.0;
    double epsilon = 1.0;
    int order = 0;
    double a1 = 1.0;
    double a2 = 0.0;

    void validate() const;
    // For 1D families q2 is ignored.
    double evaluate(double q1, double q2) const;
};

// Kernel sampled once on a grid, reused across many applications.
class DenseKernel {
public:
    DenseKernel(const KernelSpec& spec, const Grid2D& grid);
    DenseKernel(const KernelSpec& spec, const Grid1D& grid);

    const KernelSpec& spec() const { return spec_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
    double operator[](std::size_t c) const { return values_[c]; }

private:
    KernelSpec spec_;
    std::size_t rows_ = 1;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

} // namespace phasereg
