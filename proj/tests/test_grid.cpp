#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "helpers.hpp"
#include "shs/grid.hpp"
#include "shs/io.hpp"

using namespace shs;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("shs_grid_test_" + name);
}

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), std::streamsize(bytes.size()));
}

void append_u32le(std::string& s, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        s.push_back(char((v >> (8 * i)) & 0xff));
}

void append_f32le(std::string& s, float f) {
    std::uint32_t u;
    std::memcpy(&u, &f, sizeof u);
    append_u32le(s, u);
}

std::string fgrid_bytes(std::uint32_t w, std::uint32_t h, float gsd, float alt,
                        const std::vector<float>& values) {
    std::string s = "FGRD";
    append_u32le(s, w);
    append_u32le(s, h);
    append_f32le(s, gsd);
    append_f32le(s, alt);
    for (float v : values)
        append_f32le(s, v);
    return s;
}

} // namespace

TEST_CASE("FGRID format decodes the documented layout") {
    const auto p = temp_file("decode.fgrid");
    write_bytes(p, fgrid_bytes(2, 2, 0.03f, NAN, {0.0f, 0.5f, 1.0f, 0.25f}));
    const ConfidenceGrid g = load_confidence_grid(p);
    CHECK(g.meta.width == 2);
    CHECK(g.meta.height == 2);
    CHECK(g.meta.gsd_m == 0.03f);
    CHECK_FALSE(g.meta.altitude_m.has_value());
    CHECK(g.values == std::vector<float>{0.0f, 0.5f, 1.0f, 0.25f});
    fs::remove(p);
}

TEST_CASE("FGRID round trip is bit-exact") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    ConfidenceGrid g = test::uniform_grid(16, 16, 0.0f, 0.017f);
    for (auto& v : g.values)
        v = dist(rng);
    g.meta.altitude_m = 50.0f;

    const auto p = temp_file("roundtrip.fgrid");
    save_confidence_grid(g, p);
    const ConfidenceGrid back = load_confidence_grid(p);
    CHECK(back.values == g.values);
    CHECK(back.meta.gsd_m == 0.017f);
    CHECK(back.meta.altitude_m == 50.0f);

    // Second trip reproduces the file byte for byte.
    const auto p2 = temp_file("roundtrip2.fgrid");
    save_confidence_grid(back, p2);
    std::ifstream a(p, std::ios::binary), b(p2, std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)), {});
    std::string sb((std::istreambuf_iterator<char>(b)), {});
    CHECK(sa == sb);
    fs::remove(p);
    fs::remove(p2);
}

TEST_CASE("FGRID rejects malformed input") {
    SUBCASE("payload size mismatch") {
        const auto p = temp_file("short.fgrid");
        write_bytes(p, fgrid_bytes(3, 3, 0.03f, NAN,
                                   {0, 0, 0, 0, 0, 0, 0, 0}));   // 8 of 9 values
        CHECK_THROWS_AS(load_confidence_grid(p), FormatError);
        fs::remove(p);
    }
    SUBCASE("value outside [0,1]") {
        const auto p = temp_file("range.fgrid");
        write_bytes(p, fgrid_bytes(2, 1, 0.03f, NAN, {0.5f, 1.5f}));
        CHECK_THROWS_AS(load_confidence_grid(p), RangeError);
        fs::remove(p);
    }
    SUBCASE("bad magic") {
        const auto p = temp_file("magic.bin");
        write_bytes(p, "GRDF????????????????");
        CHECK_THROWS_AS(load_confidence_grid(p), FormatError);
        fs::remove(p);
    }
    SUBCASE("unwritable destination") {
        const ConfidenceGrid g = test::uniform_grid(2, 2, 0.5f);
        CHECK_THROWS_AS(save_confidence_grid(g, "/nonexistent_dir/x.fgrid"), IoError);
    }
}

TEST_CASE("PGM confidence input normalizes by 255") {
    const auto p = temp_file("conf.pgm");
    std::string s = "P5\n2 1\n255\n";
    s.push_back(char(255));
    s.push_back(char(0));
    write_bytes(p, s);
    const ConfidenceGrid g = load_confidence_grid(p);
    CHECK(g.values[0] == 1.0f);
    CHECK(g.values[1] == 0.0f);
    CHECK(g.meta.gsd_m == 1.0f);
    fs::remove(p);
}

TEST_CASE("PGM round trip is exact up to 1/255 quantization") {
    std::mt19937 rng(12);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    ConfidenceGrid g = test::uniform_grid(9, 7, 0.0f);
    for (auto& v : g.values)
        v = dist(rng);
    const auto p = temp_file("quant.pgm");
    save_confidence_grid(g, p);
    const ConfidenceGrid back = load_confidence_grid(p);
    for (std::size_t i = 0; i < g.values.size(); ++i)
        CHECK(std::abs(back.values[i] - g.values[i]) <= 0.5f / 255.0f + 1e-6f);
    fs::remove(p);
}

TEST_CASE("mask PGM rejects gray values") {
    const auto p = temp_file("gray.pgm");
    std::string s = "P5\n2 1\n255\n";
    s.push_back(char(255));
    s.push_back(char(128));
    write_bytes(p, s);
    CHECK_THROWS_AS(load_mask_pgm(p), FormatError);
    fs::remove(p);
}

TEST_CASE("threshold keeps values at or above tau") {
    ConfidenceGrid g = test::uniform_grid(3, 1, 0.0f);
    g.values = {0.4f, 0.5f, 0.6f};
    const BinaryMask m = threshold(g, 0.5);
    CHECK(m.bits == std::vector<std::uint8_t>{0, 1, 1});

    CHECK(threshold(g, 0.0).bits == std::vector<std::uint8_t>{1, 1, 1});
    CHECK(threshold(g, 0.7).bits == std::vector<std::uint8_t>{0, 0, 0});
    CHECK_THROWS_AS(threshold(g, 1.5), ArgumentError);
    CHECK_THROWS_AS(threshold(g, -0.1), ArgumentError);
}

TEST_CASE("threshold is monotone in tau") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    std::uniform_real_distribution<double> taud(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        ConfidenceGrid g = test::uniform_grid(17, 9, 0.0f);
        for (auto& v : g.values)
            v = dist(rng);
        double t1 = taud(rng), t2 = taud(rng);
        if (t1 > t2)
            std::swap(t1, t2);
        const BinaryMask lo = threshold(g, t1);
        const BinaryMask hi = threshold(g, t2);
        for (std::size_t i = 0; i < lo.bits.size(); ++i)
            CHECK(hi.bits[i] <= lo.bits[i]);
    }
}

TEST_CASE("altitude_to_gsd reproduces the calibration table") {
    const double alts[] = {50, 60, 70, 80, 90, 100, 110, 120};
    const double gsds[] = {0.017, 0.021, 0.025, 0.028, 0.032, 0.035, 0.039, 0.043};
    for (int i = 0; i < 8; ++i) {
        const GsdEstimate e = altitude_to_gsd(alts[i]);
        CHECK(e.gsd_m == gsds[i]);
        CHECK_FALSE(e.extrapolated);
    }
}

TEST_CASE("altitude_to_gsd interpolates and extrapolates") {
    CHECK(altitude_to_gsd(55.0).gsd_m == doctest::Approx(0.019).epsilon(1e-12));
    CHECK_FALSE(altitude_to_gsd(55.0).extrapolated);

    CHECK(altitude_to_gsd(40.0).extrapolated);
    CHECK(altitude_to_gsd(130.0).extrapolated);
    // Linear continuation of the nearest rows.
    CHECK(altitude_to_gsd(130.0).gsd_m == doctest::Approx(0.047).epsilon(1e-9));
    CHECK(altitude_to_gsd(40.0).gsd_m == doctest::Approx(0.013).epsilon(1e-9));

    CHECK_THROWS_AS(altitude_to_gsd(0.0), ArgumentError);
    CHECK_THROWS_AS(altitude_to_gsd(-10.0), ArgumentError);
}

TEST_CASE("altitude_to_gsd is nondecreasing over the table range") {
    double prev = 0.0;
    for (double alt = 50.0; alt <= 120.0; alt += 0.5) {
        const double g = altitude_to_gsd(alt).gsd_m;
        CHECK(g >= prev);
        prev = g;
    }
}
