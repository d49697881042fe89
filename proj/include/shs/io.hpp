#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "shs/grid.hpp"

namespace shs {

// 8-bit RGB raster, row-major interleaved (3 bytes per pixel).
struct RgbImage {
    GeoMeta meta;
    std::vector<std::uint8_t> rgb;

    std::uint8_t* pixel(std::uint32_t x, std::uint32_t y) {
        return rgb.data() + 3 * (std::size_t(y) * meta.width + x);
    }
    const std::uint8_t* pixel(std::uint32_t x, std::uint32_t y) const {
        return rgb.data() + 3 * (std::size_t(y) * meta.width + x);
    }
};

// Confidence-grid file I/O. Two formats:
//
//  FGRID (binary): magic "FGRD", little-endian u32 width, u32 height,
//  f32 gsd_m, f32 altitude_m (NaN = absent), then width*height f32 values
//  row-major. No padding. Round-trips bit-exactly.
//
//  PGM P5 (binary, maxval 255): values are confidence*255. PGM carries no
//  geospatial metadata, so gsd_m defaults to 1.0 on load; callers that know
//  the true GSD overwrite it.
//
// load sniffs the format from the leading magic; save dispatches on the
// file extension (".pgm" writes PGM, anything else FGRID).
ConfidenceGrid load_confidence_grid(const std::filesystem::path& path);
void save_confidence_grid(const ConfidenceGrid& grid, const std::filesystem::path& path);

// Binary-mask PGM I/O: pixel 0 = background, 255 = foreground. Any other
// value on load is rejected.
BinaryMask load_mask_pgm(const std::filesystem::path& path);
void save_mask_pgm(const BinaryMask& mask, const std::filesystem::path& path);

// PPM P6 (binary, maxval 255). gsd_m defaults to 1.0 on load.
RgbImage load_ppm(const std::filesystem::path& path);
void save_ppm(const RgbImage& image, const std::filesystem::path& path);

} // namespace shs
