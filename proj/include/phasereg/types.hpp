#pragma once

#include <string>
#include <vector>

#include "phasereg/grid.hpp"

namespace phasereg {

enum class Mode { Frame, Slice };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

// Normalized intensity I/I0 on a detector frame.
struct Frame {
    Array2D data;
    Grid2D grid;

    Frame() = default;
    Frame(Array2D data, Grid2D grid);
};

// One detector line of normalized intensity.
struct Signal1D {
    std::vector<double> data;
    Grid1D grid;

    Signal1D() = default;
    Signal1D(std::vector<double> data, Grid1D grid);
};

// Rows are angles, columns ray offsets t.
struct Sinogram {
    Array2D data;
    Grid1D t_grid;
    std::vector<double> angles;

    Sinogram() = default;
    Sinogram(Array2D data, Grid1D t_grid, std::vector<double> angles);
    bool uniform_angles() const;
};

// Reconstructed cross-section on a square grid.
struct Slice {
    Array2D data;
    Grid2D grid;
    double fov_radius = 0.0;
};

struct Provenance {
    Mode mode = Mode::Frame;
    double ell = 0.0;
    double m = 0.0;
    double c = 1.0;
};

struct RetrievedMap {
    Array2D data;
    Provenance provenance;
};

std::vector<double> uniform_angles(std::size_t count);

} // namespace phasereg
