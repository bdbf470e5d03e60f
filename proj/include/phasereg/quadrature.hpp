#pragma once

#include <functional>

namespace phasereg {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

// Adaptive Gauss-Kronrod (7/15) on [a, b].
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-10,
                           double rel_tol = 1e-12, int max_depth = 50);

} // namespace phasereg
