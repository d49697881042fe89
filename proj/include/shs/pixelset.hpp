#pragma once

#include <cstdint>
#include <vector>

namespace shs {

// Pixel sets are sorted vectors of packed (x,y) keys. Packing keeps set
// algebra (IoU, unions) independent of any particular raster width.
using PixelKey = std::uint64_t;
using PixelSet = std::vector<PixelKey>;   // kept sorted ascending

inline PixelKey pixel_key(std::uint32_t x, std::uint32_t y) {
    return (PixelKey(y) << 32) | PixelKey(x);
}
inline std::uint32_t pixel_x(PixelKey k) { return std::uint32_t(k & 0xffffffffu); }
inline std::uint32_t pixel_y(PixelKey k) { return std::uint32_t(k >> 32); }

// Row-major run-length encoding of a pixel set: list of (start_index, run_length)
// pairs over linear index y*width + x, sorted by start.
std::vector<std::pair<std::uint64_t, std::uint64_t>> pixels_to_rle(const PixelSet& pixels,
                                                                   std::uint32_t width);
PixelSet rle_to_pixels(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& runs,
                       std::uint32_t width);

} // namespace shs
