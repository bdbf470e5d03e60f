#pragma once

#include <vector>

#include "phasereg/types.hpp"

namespace phasereg {

// Pre-log smoothing K_ell * f with the mask applied in frequency.
Array2D smooth_frame(const Frame& f, double ell, const CutoffMask& mask);

// p = -c ln(K_ell * f).
RetrievedMap filter_frame(const Frame& f, double ell, const CutoffMask& mask, double c = 1.0);

// p = T_ell * g along t, row by row.
RetrievedMap filter_sinogram(const Sinogram& g, double ell, const CutoffMask& mask);

// 1D detector line: frame mode is -c ln(T*f), slice mode is T*(-ln f).
std::vector<double> retrieve_signal(const Signal1D& f, double ell, const CutoffMask& mask, Mode mode,
                                    double c = 1.0);

struct DeltaReport {
    Array2D delta;
    double max_abs = 0.0;
    double bound = 0.0;
    bool bound_holds = true;
};

// T_ell * (-ln f) along rows plus ln(K_ell * f), both with the same mask.
// bound = 2 |ln f|_2 / (1 + 4 pi^2 ell).
DeltaReport delta_field(const Frame& f, double ell, const CutoffMask& mask = CutoffMask::full());

} // namespace phasereg
