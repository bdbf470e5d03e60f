#include "doctest.h"
#include "helpers.hpp"

#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "phasereg/errors.hpp"
#include "phasereg/io.hpp"

using namespace phasereg;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "phasereg_test_io";
    fs::create_directories(dir);
    return (dir / name).string();
}

std::vector<char> bytes_of(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("f64 round trip is bitwise") {
    ArrayHeader h;
    h.shape = {2, 2};
    h.delta = 0.1;
    h.meta["note"] = "hello world";
    const std::vector<double> v{1.0 / 3.0, -0.0, 1e-310, std::nextafter(1.0, 2.0)};
    const std::string path = temp_path("a.prkt");
    write_array(path, h, v);
    const ArrayFile back = read_array(path);
    REQUIRE(back.values.size() == 4);
    CHECK(std::memcmp(back.values.data(), v.data(), 4 * sizeof(double)) == 0);
    CHECK(back.header.shape == h.shape);
    CHECK(back.header.delta == 0.1);
    CHECK(back.header.meta.at("note") == "hello world");
    write_array(temp_path("b.prkt"), back.header, back.values);
    CHECK(bytes_of(path) == bytes_of(temp_path("b.prkt")));
}

TEST_CASE("header text and payload layout") {
    ArrayHeader h;
    h.shape = {3};
    h.delta = 0.5;
    const std::string path = temp_path("c.prkt");
    write_array(path, h, {1.0, 2.0, 3.0});
    const auto b = bytes_of(path);
    const std::string text(b.begin(), b.end());
    CHECK(text.rfind("magic: PRKT1\n", 0) == 0);
    const auto end = text.find("\n\n");
    REQUIRE(end != std::string::npos);
    CHECK(b.size() - (end + 2) == 3 * sizeof(double));
    double first;
    std::memcpy(&first, b.data() + end + 2, sizeof(double));
    CHECK(first == 1.0);
}

TEST_CASE("f32 payload and sinogram angles") {
    ArrayHeader h;
    h.dtype = DType::F32;
    h.kind = ArrayKind::Sinogram;
    h.shape = {2, 3};
    h.angles = {0.0, 1.5};
    const std::string path = temp_path("d.prkt");
    write_array(path, h, {0.5, 1.5, -2.0, 4.0, 8.0, 0.25});
    const ArrayFile back = read_array(path);
    CHECK(back.header.dtype == DType::F32);
    CHECK(back.values == std::vector<double>{0.5, 1.5, -2.0, 4.0, 8.0, 0.25});
    CHECK(back.header.angles == h.angles);

    auto bytes = bytes_of(path);
    std::string text(bytes.begin(), bytes.end());
    const auto pos = text.find("dtype: f32");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 10, "dtype: f64");
    std::ofstream(temp_path("e.prkt"), std::ios::binary) << text;
    CHECK_THROWS_AS(read_array(temp_path("e.prkt")), InputError);
}

TEST_CASE("reader rejects bad files") {
    std::ofstream(temp_path("f.prkt"), std::ios::binary) << "magic: PRKT2\ndtype: f64\nshape: 1\ndelta: 1\nkind: FRAME\n\n";
    CHECK_THROWS_WITH_AS(read_array(temp_path("f.prkt")), doctest::Contains("unsupported format version"), InputError);
    std::ofstream(temp_path("g.prkt"), std::ios::binary) << "hello\n\n";
    CHECK_THROWS_AS(read_array(temp_path("g.prkt")), InputError);
    std::ofstream(temp_path("h.prkt"), std::ios::binary) << "magic: PRKT1\ndtype: f64\nshape: 1\ndelta: 1\nkind: FRAME\ncolour: red\n\n";
    CHECK_THROWS_AS(read_array(temp_path("h.prkt")), InputError);
    CHECK_THROWS_AS(read_array(temp_path("missing.prkt")), InputError);

    ArrayHeader h;
    h.shape = {2, 2};
    CHECK_THROWS_AS(write_array(temp_path("i.prkt"), h, {1.0}), InputError);
    h.angles = {0.0, 1.0};
    CHECK_THROWS_AS(write_array(temp_path("i.prkt"), h, {1.0, 2.0, 3.0, 4.0}), InputError);
    CHECK_THROWS_AS(write_array("/nonexistent/dir/x.prkt", ArrayHeader{DType::F64, {1}}, {1.0}), InputError);
}

TEST_CASE("series stack round trip is fast") {
    ArrayHeader h;
    h.kind = ArrayKind::Series;
    h.shape = {29, 256, 256};
    std::vector<double> v(29 * 256 * 256);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& x : v)
        x = u(rng);
    const auto t0 = std::chrono::steady_clock::now();
    write_array(temp_path("s.prkt"), h, v);
    const ArrayFile back = read_array(temp_path("s.prkt"));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    MESSAGE("series round trip: " << secs << " s");
    CHECK(back.values == v);
    CHECK(secs < 1.0);
}

TEST_CASE("curve files") {
    std::vector<double> ell(48), kappa(48);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (std::size_t i = 0; i < 48; ++i) {
        ell[i] = std::exp(u(rng) / 100.0);
        kappa[i] = u(rng) / 7.0;
    }
    const std::string path = temp_path("k.dat");
    write_curve(path, {{"ell", ell}, {"kappa", kappa}});
    std::ifstream in(path);
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line);)
        ++lines;
    CHECK(lines == 49);
    const auto back = read_curve(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].name == "ell");
    CHECK(back[0].values == ell);
    CHECK(back[1].values == kappa);

    write_curve(temp_path("empty.dat"), {{"a", {}}, {"b", {}}});
    const auto empty = read_curve(temp_path("empty.dat"));
    CHECK(empty.size() == 2);
    CHECK(empty[0].values.empty());
    CHECK_THROWS_AS(write_curve(temp_path("r.dat"), {{"a", {1.0}}, {"b", {}}}), InputError);
}

TEST_CASE("typed conversions") {
    set_warnings_enabled(false);
    const Frame f(Array2D(3, 4, 0.5), Grid2D(3, 4, 0.2));
    const Frame f2 = frame_from(to_file(f));
    CHECK(f2.data.values() == f.data.values());
    CHECK(f2.grid.delta == 0.2);
    const Sinogram g(Array2D(2, 4, 1.0), Grid1D(4, 0.3), {0.0, 1.0});
    const Sinogram g2 = sinogram_from(to_file(g));
    CHECK(g2.angles == g.angles);
    CHECK(g2.t_grid.delta == 0.3);
    CHECK_THROWS_AS(frame_from(to_file(g)), InputError);
    const Signal1D s({0.5, 0.6, 0.7}, Grid1D(3, 0.1));
    CHECK(signal_from(to_file(s)).data == s.data);
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(parse_double(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK_THROWS_AS(parse_double("1,5"), InputError);
}
