#pragma once

#include <vector>

#include "phasereg/types.hpp"

namespace phasereg {

struct FunctionalReport {
    double value = 0.0;
    double directional_derivative = 0.0;
    double fd_derivative = 0.0;
    double rel_error = 0.0;
};

// Norms are grid sums times cell area; derivatives are spectral.
double eval_E(const Array2D& p, const Array2D& g, const Grid2D& grid);   // |e^-p - e^-g|^2
double eval_R(const Array2D& p, const Grid2D& grid);                     // |grad e^-p|^2
double eval_R_finite_difference(const Array2D& p, const Grid2D& grid);  // forward differences, periodic
double eval_H(const Array2D& p, const Frame& f, double ell);            // |e^-p - f|^2 + ell |grad e^-p|^2
double eval_V(const Array2D& p, const Sinogram& g, double ell);         // |p - g|^2 + ell |d_t p|^2

// E'(p)h = 2 <e^-p (e^-g - e^-p), h>
double derivative_E(const Array2D& p, const Array2D& g, const Grid2D& grid, const Array2D& h);
// R'(p)h = 2 <e^-p Lap(e^-p), h>
double derivative_R(const Array2D& p, const Grid2D& grid, const Array2D& h);
double derivative_H(const Array2D& p, const Frame& f, double ell, const Array2D& h);

// Central differences with step 1e-5 (1 + |p|_inf).
std::vector<FunctionalReport> frechet_check_E(const Array2D& p, const Array2D& g, const Grid2D& grid,
                                              const std::vector<Array2D>& directions);
std::vector<FunctionalReport> frechet_check_R(const Array2D& p, const Grid2D& grid,
                                              const std::vector<Array2D>& directions);

struct SecondOrderReport {
    std::vector<double> quotients;
    double min_normalized = 0.0;  // min over v of quotient / |v|^2
    bool nonnegative = true;      // every quotient >= -1e-6 |v|^2
};

// [H(p + eps v) - 2 H(p) + H(p - eps v)] / eps^2 for each v.
SecondOrderReport second_order_check(const Array2D& p_bar, const Frame& f, double ell,
                                     const std::vector<Array2D>& directions, double eps = 1e-3);

struct ExpansionCheck {
    double lhs = 0.0;  // V(p + eps v) - V(p)
    double rhs = 0.0;  // eps^2 (|v|^2 + ell |d_t v|^2)
    double rel_error = 0.0;
};

ExpansionCheck v_expansion_check(const Array2D& p_star, const Sinogram& g, double ell, const Array2D& v, double eps);

double inner(const Array2D& a, const Array2D& b, double cell);

} // namespace phasereg
