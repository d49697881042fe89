#include "shs/pixelset.hpp"

namespace shs {

std::vector<std::pair<std::uint64_t, std::uint64_t>> pixels_to_rle(const PixelSet& pixels,
                                                                   std::uint32_t width) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> runs;
    for (PixelKey k : pixels) {
        const std::uint64_t idx = std::uint64_t(pixel_y(k)) * width + pixel_x(k);
        if (!runs.empty() && runs.back().first + runs.back().second == idx)
            ++runs.back().second;
        else
            runs.emplace_back(idx, 1);
    }
    return runs;
}

PixelSet rle_to_pixels(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& runs,
                       std::uint32_t width) {
    PixelSet pixels;
    for (const auto& [start, len] : runs) {
        for (std::uint64_t i = start; i < start + len; ++i)
            pixels.push_back(pixel_key(std::uint32_t(i % width), std::uint32_t(i / width)));
    }
    return pixels;
}

} // namespace shs
