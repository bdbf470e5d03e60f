#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "phasereg/types.hpp"

namespace phasereg {

enum class DType { F32, F64 };
enum class ArrayKind { Frame, Sinogram, Slice, Series };

std::string to_string(DType t);
std::string to_string(ArrayKind k);

// Text header ("key: value" lines, blank line terminated) then a raw
// little-endian row-major payload.
struct ArrayHeader {
    DType dtype = DType::F64;
    std::vector<std::size_t> shape;
    double delta = 1.0;
    ArrayKind kind = ArrayKind::Frame;
    std::vector<double> angles;
    std::map<std::string, std::string> meta;

    std::size_t element_count() const;
    void validate() const;
};

struct ArrayFile {
    ArrayHeader header;
    std::vector<double> values;
};

void write_array(const std::string& path, const ArrayHeader& header, const std::vector<double>& values);
ArrayFile read_array(const std::string& path);

struct CurveColumn {
    std::string name;
    std::vector<double> values;
};

void write_curve(const std::string& path, const std::vector<CurveColumn>& columns);
std::vector<CurveColumn> read_curve(const std::string& path);

// 17 significant digits, locale independent.
std::string format_double(double v);
double parse_double(const std::string& text);

ArrayFile to_file(const Frame& f);
ArrayFile to_file(const Sinogram& g);
ArrayFile to_file(const Slice& s);
ArrayFile to_file(const Signal1D& s);
Frame frame_from(const ArrayFile& file);
Sinogram sinogram_from(const ArrayFile& file);
Slice slice_from(const ArrayFile& file);
Signal1D signal_from(const ArrayFile& file);

} // namespace phasereg
