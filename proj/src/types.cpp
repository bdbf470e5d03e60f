#include "phasereg/types.hpp"

#include <cmath>
#include <numbers>

namespace phasereg {

namespace {

void check_positive(const std::vector<double>& values, const char* what) {
    bool above_one = false;
    for (double v : values) {
        if (!std::isfinite(v) || !(v > 0.0))
            throw InputError(std::string(what) + ": intensities must be finite and > 0");
        above_one = above_one || v > 1.0;
    }
    if (above_one)
        warn(std::string(what) + ": intensity above 1 (flat-field noise?), processing anyway");
}

} // namespace

std::string to_string(Mode mode) { return mode == Mode::Frame ? "frame" : "slice"; }

Mode parse_mode(const std::string& text) {
    if (text == "frame" || text == "FRAME")
        return Mode::Frame;
    if (text == "slice" || text == "SLICE")
        return Mode::Slice;
    throw InputError("unknown mode '" + text + "' (expected frame or slice)");
}

Frame::Frame(Array2D data_, Grid2D grid_) : data(std::move(data_)), grid(grid_) {
    if (data.rows() != grid.rows || data.cols() != grid.cols)
        throw InputError("frame: data shape does not match grid");
    check_positive(data.values(), "frame");
}

Signal1D::Signal1D(std::vector<double> data_, Grid1D grid_) : data(std::move(data_)), grid(grid_) {
    if (data.size() != grid.n)
        throw InputError("signal: length does not match grid");
    check_positive(data, "signal");
}

Sinogram::Sinogram(Array2D data_, Grid1D t_grid_, std::vector<double> angles_)
    : data(std::move(data_)), t_grid(t_grid_), angles(std::move(angles_)) {
    if (angles.size() < 2)
        throw InputError("sinogram: at least two angles required");
    if (data.rows() != angles.size() || data.cols() != t_grid.n)
        throw InputError("sinogram: data shape does not match angles x t_grid");
    for (std::size_t i = 0; i < angles.size(); ++i) {
        if (!(angles[i] >= 0.0 && angles[i] < std::numbers::pi))
            throw InputError("sinogram: angles must lie in [0, pi)");
        if (i > 0 && !(angles[i] > angles[i - 1]))
            throw InputError("sinogram: angles must be strictly increasing");
    }
    for (double v : data.values())
        if (!std::isfinite(v))
            throw InputError("sinogram: entries must be finite");
}

bool Sinogram::uniform_angles() const {
    const double step = std::numbers::pi / static_cast<double>(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i)
        if (std::abs(angles[i] - static_cast<double>(i) * step) > 1e-9)
            return false;
    return true;
}

std::vector<double> uniform_angles(std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
    return out;
}

} // namespace phasereg
