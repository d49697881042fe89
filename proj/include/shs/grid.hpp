#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shs/errors.hpp"

namespace shs {

// Geospatial raster metadata shared by all grid types. Row-major storage,
// origin at the top-left corner, x rightward, y downward.
struct GeoMeta {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    float gsd_m = 0.0f;                      // meters per pixel (pixel pitch)
    std::optional<float> altitude_m;
    std::optional<std::string> tag;          // free-form grouping label, e.g. "sport-mode"
    std::optional<float> effective_gsd_m;    // set by resolution simulation

    std::size_t pixel_count() const { return std::size_t(width) * height; }
    double pixel_area_m2() const { return double(gsd_m) * double(gsd_m); }
    void validate() const;
};

// Per-pixel detection confidences in [0,1].
struct ConfidenceGrid {
    GeoMeta meta;
    std::vector<float> values;

    float at(std::uint32_t x, std::uint32_t y) const {
        return values[std::size_t(y) * meta.width + x];
    }
};

struct BinaryMask {
    GeoMeta meta;
    std::vector<std::uint8_t> bits;   // 0 or 1

    bool at(std::uint32_t x, std::uint32_t y) const {
        return bits[std::size_t(y) * meta.width + x] != 0;
    }
};

// Connected-component labels; 0 is background, components are 1..num_labels
// with no gaps, numbered in raster-scan order of each component's first pixel.
struct LabelGrid {
    GeoMeta meta;
    std::vector<std::uint32_t> labels;
    std::uint32_t num_labels = 0;

    std::uint32_t at(std::uint32_t x, std::uint32_t y) const {
        return labels[std::size_t(y) * meta.width + x];
    }
};

// Mask bit i = (values[i] >= tau). The comparison is inclusive so that
// sweeping tau over object confidences reproduces each object exactly.
BinaryMask threshold(const ConfidenceGrid& grid, double tau);

struct GsdEstimate {
    double gsd_m = 0.0;
    bool extrapolated = false;   // altitude outside the calibrated 50-120 m range
};

// Piecewise-linear altitude -> ground sampling distance over the calibrated
// table {50m: 1.7cm .. 120m: 4.3cm}. Outside [50,120] m the nearest two rows
// extrapolate linearly and the result is flagged.
GsdEstimate altitude_to_gsd(double altitude_m);

} // namespace shs
