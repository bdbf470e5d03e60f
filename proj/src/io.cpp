#include "phasereg/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace phasereg {

namespace {

constexpr const char* kMagic = "PRKT1";

template <typename U>
U to_little(U v) {
    if constexpr (std::endian::native == std::endian::big) {
        U out = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i)
            out |= ((v >> (8 * i)) & 0xff) << (8 * (sizeof(U) - 1 - i));
        return out;
    }
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

DType parse_dtype(const std::string& s) {
    if (s == "f32")
        return DType::F32;
    if (s == "f64")
        return DType::F64;
    throw InputError("io: unknown dtype '" + s + "'");
}

ArrayKind parse_kind(const std::string& s) {
    if (s == "FRAME")
        return ArrayKind::Frame;
    if (s == "SINOGRAM")
        return ArrayKind::Sinogram;
    if (s == "SLICE")
        return ArrayKind::Slice;
    if (s == "SERIES")
        return ArrayKind::Series;
    throw InputError("io: unknown kind '" + s + "'");
}

std::size_t parse_size(const std::string& s) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v == 0)
        throw InputError("io: bad shape entry '" + s + "'");
    return v;
}

} // namespace

std::string to_string(DType t) { return t == DType::F32 ? "f32" : "f64"; }

std::string to_string(ArrayKind k) {
    switch (k) {
    case ArrayKind::Frame:
        return "FRAME";
    case ArrayKind::Sinogram:
        return "SINOGRAM";
    case ArrayKind::Slice:
        return "SLICE";
    case ArrayKind::Series:
        return "SERIES";
    }
    return "FRAME";
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const char* first = t.data();
    if (!t.empty() && t[0] == '+')
        ++first;
    const auto res = std::from_chars(first, t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty())
        throw InputError("io: cannot parse number '" + text + "'");
    return v;
}

std::size_t ArrayHeader::element_count() const {
    std::size_t n = 1;
    for (auto s : shape)
        n *= s;
    return n;
}

void ArrayHeader::validate() const {
    if (shape.empty() || shape.size() > 3)
        throw InputError("io: shape must have 1 to 3 dimensions");
    for (auto s : shape)
        if (s == 0)
            throw InputError("io: shape entries must be positive");
    if (!std::isfinite(delta) || !(delta > 0.0))
        throw InputError("io: delta must be positive");
    if (!angles.empty()) {
        if (kind != ArrayKind::Sinogram)
            throw InputError("io: angles are only allowed for SINOGRAM arrays");
        if (shape.size() != 2 || angles.size() != shape[0])
            throw InputError("io: angle count does not match the angle dimension");
    }
    for (const auto& [k, v] : meta) {
        if (k.empty() || k.find_first_of(" \t\r\n:") != std::string::npos)
            throw InputError("io: meta key '" + k + "' must be a nonempty token without ':' or whitespace");
        if (v.find_first_of("\r\n") != std::string::npos)
            throw InputError("io: meta value for '" + k + "' contains a line break");
    }
}

void write_array(const std::string& path, const ArrayHeader& header, const std::vector<double>& values) {
    header.validate();
    if (values.size() != header.element_count())
        throw InputError("io: value count does not match shape");
    std::ostringstream head;
    head << "magic: " << kMagic << '\n';
    head << "dtype: " << to_string(header.dtype) << '\n';
    head << "shape:";
    for (auto s : header.shape)
        head << ' ' << s;
    head << '\n';
    head << "delta: " << format_double(header.delta) << '\n';
    head << "kind: " << to_string(header.kind) << '\n';
    if (!header.angles.empty()) {
        head << "angles:";
        for (double a : header.angles)
            head << ' ' << format_double(a);
        head << '\n';
    }
    for (const auto& [k, v] : header.meta)
        head << "meta." << k << ": " << v << '\n';
    head << '\n';

    std::string payload;
    if (header.dtype == DType::F64) {
        payload.resize(values.size() * 8);
        for (std::size_t i = 0; i < values.size(); ++i) {
            const auto bits = to_little(std::bit_cast<std::uint64_t>(values[i]));
            std::memcpy(payload.data() + 8 * i, &bits, 8);
        }
    } else {
        payload.resize(values.size() * 4);
        for (std::size_t i = 0; i < values.size(); ++i) {
            const auto bits = to_little(std::bit_cast<std::uint32_t>(static_cast<float>(values[i])));
            std::memcpy(payload.data() + 4 * i, &bits, 4);
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw InputError("io: cannot open '" + path + "' for writing");
    const std::string h = head.str();
    out.write(h.data(), static_cast<std::streamsize>(h.size()));
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out)
        throw InputError("io: write to '" + path + "' failed");
}

ArrayFile read_array(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("io: cannot open '" + path + "'");
    ArrayFile file;
    ArrayHeader& h = file.header;
    bool saw_magic = false, saw_dtype = false, saw_shape = false, saw_delta = false, saw_kind = false;
    std::string line;
    bool first = true;
    while (true) {
        if (!std::getline(in, line))
            throw InputError("io: '" + path + "' ends inside the header");
        if (line.empty())
            break;
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw InputError("io: malformed header line '" + line + "'");
        const std::string key = trim(line.substr(0, colon));
        const std::string value = trim(line.substr(colon + 1));
        if (first) {
            if (key != "magic")
                throw InputError("io: '" + path + "' is not a PRKT file");
            if (value != kMagic) {
                if (value.rfind("PRKT", 0) == 0)
                    throw InputError("io: unsupported format version '" + value + "'");
                throw InputError("io: '" + path + "' is not a PRKT file");
            }
            saw_magic = true;
            first = false;
            continue;
        }
        if (key == "dtype") {
            h.dtype = parse_dtype(value);
            saw_dtype = true;
        } else if (key == "shape") {
            h.shape.clear();
            for (const auto& tok : split_ws(value))
                h.shape.push_back(parse_size(tok));
            saw_shape = true;
        } else if (key == "delta") {
            h.delta = parse_double(value);
            saw_delta = true;
        } else if (key == "kind") {
            h.kind = parse_kind(value);
            saw_kind = true;
        } else if (key == "angles") {
            h.angles.clear();
            for (const auto& tok : split_ws(value))
                h.angles.push_back(parse_double(tok));
        } else if (key.rfind("meta.", 0) == 0) {
            h.meta[key.substr(5)] = value;
        } else {
            throw InputError("io: unknown header key '" + key + "'");
        }
    }
    if (!(saw_magic && saw_dtype && saw_shape && saw_delta && saw_kind))
        throw InputError("io: header of '" + path + "' is missing required keys");
    h.validate();

    const std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::size_t width = h.dtype == DType::F64 ? 8 : 4;
    const std::size_t count = h.element_count();
    if (payload.size() != count * width)
        throw InputError("io: payload of '" + path + "' has " + std::to_string(payload.size()) + " bytes, header implies " +
                         std::to_string(count * width));
    file.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (width == 8) {
            std::uint64_t bits;
            std::memcpy(&bits, payload.data() + 8 * i, 8);
            file.values[i] = std::bit_cast<double>(to_little(bits));
        } else {
            std::uint32_t bits;
            std::memcpy(&bits, payload.data() + 4 * i, 4);
            file.values[i] = static_cast<double>(std::bit_cast<float>(to_little(bits)));
        }
    }
    return file;
}

void write_curve(const std::string& path, const std::vector<CurveColumn>& columns) {
    const std::size_t rows = columns.empty() ? 0 : columns.front().values.size();
    for (const auto& c : columns) {
        if (c.values.size() != rows)
            throw InputError("io: curve columns have different lengths");
        if (c.name.empty() || c.name.find_first_of(" \t\r\n") != std::string::npos)
            throw InputError("io: curve column names must be nonempty tokens");
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw InputError("io: cannot open '" + path + "' for writing");
    out << '#';
    for (const auto& c : columns)
        out << ' ' << c.name;
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << (c ? " " : "") << format_double(columns[c].values[r]);
        out << '\n';
    }
    if (!out)
        throw InputError("io: write to '" + path + "' failed");
}

std::vector<CurveColumn> read_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("io: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line.empty() || line[0] != '#')
        throw InputError("io: curve file '" + path + "' lacks a header line");
    std::vector<CurveColumn> cols;
    for (const auto& name : split_ws(line.substr(1)))
        cols.push_back({name, {}});
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        const auto toks = split_ws(line);
        if (toks.size() != cols.size())
            throw InputError("io: ragged row in curve file '" + path + "'");
        for (std::size_t c = 0; c < cols.size(); ++c)
            cols[c].values.push_back(parse_double(toks[c]));
    }
    return cols;
}

ArrayFile to_file(const Frame& f) {
    ArrayFile file;
    file.header.shape = {f.grid.rows, f.grid.cols};
    file.header.delta = f.grid.delta;
    file.header.kind = ArrayKind::Frame;
    file.values = f.data.values();
    return file;
}

ArrayFile to_file(const Sinogram& g) {
    ArrayFile file;
    file.header.shape = {g.data.rows(), g.data.cols()};
    file.header.delta = g.t_grid.delta;
    file.header.kind = ArrayKind::Sinogram;
    file.header.angles = g.angles;
    file.values = g.data.values();
    return file;
}

ArrayFile to_file(const Slice& s) {
    ArrayFile file;
    file.header.shape = {s.grid.rows, s.grid.cols};
    file.header.delta = s.grid.delta;
    file.header.kind = ArrayKind::Slice;
    file.header.meta["fov_radius"] = format_double(s.fov_radius);
    file.values = s.data.values();
    return file;
}

ArrayFile to_file(const Signal1D& s) {
    ArrayFile file;
    file.header.shape = {s.grid.n};
    file.header.delta = s.grid.delta;
    file.header.kind = ArrayKind::Frame;
    file.values = s.data;
    return file;
}

Frame frame_from(const ArrayFile& file) {
    const auto& h = file.header;
    if (h.kind != ArrayKind::Frame || h.shape.size() != 2)
        throw InputError("io: expected a 2D FRAME array");
    return {Array2D(h.shape[0], h.shape[1], file.values), Grid2D(h.shape[0], h.shape[1], h.delta)};
}

Sinogram sinogram_from(const ArrayFile& file) {
    const auto& h = file.header;
    if (h.kind != ArrayKind::Sinogram || h.shape.size() != 2)
        throw InputError("io: expected a 2D SINOGRAM array");
    std::vector<double> angles = h.angles.empty() ? uniform_angles(h.shape[0]) : h.angles;
    return {Array2D(h.shape[0], h.shape[1], file.values), Grid1D(h.shape[1], h.delta), std::move(angles)};
}

Slice slice_from(const ArrayFile& file) {
    const auto& h = file.header;
    if (h.kind != ArrayKind::Slice || h.shape.size() != 2)
        throw InputError("io: expected a 2D SLICE array");
    Slice s{Array2D(h.shape[0], h.shape[1], file.values), Grid2D(h.shape[0], h.shape[1], h.delta), 0.0};
    auto it = h.meta.find("fov_radius");
    s.fov_radius = it != h.meta.end() ? parse_double(it->second)
                                      : 0.5 * static_cast<double>(std::min(h.shape[0], h.shape[1])) * h.delta;
    return s;
}

Signal1D signal_from(const ArrayFile& file) {
    const auto& h = file.header;
    if (h.kind != ArrayKind::Frame || h.shape.size() != 1)
        throw InputError("io: expected a 1D FRAME array");
    return {file.values, Grid1D(h.shape[0], h.delta)};
}

} // namespace phasereg
