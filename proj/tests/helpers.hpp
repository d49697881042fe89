#pragma once

// Small fixture builders shared across test files.

#include <random>
#include <string>
#include <vector>

#include "shs/annotate.hpp"
#include "shs/detect.hpp"
#include "shs/grid.hpp"

namespace shs::test {

inline GeoMeta meta(std::uint32_t w, std::uint32_t h, float gsd = 1.0f) {
    GeoMeta m;
    m.width = w;
    m.height = h;
    m.gsd_m = gsd;
    return m;
}

// Rows of '.' (background) and 'X' (foreground); all rows equal length.
inline BinaryMask mask_from_art(const std::vector<std::string>& rows, float gsd = 1.0f) {
    BinaryMask m;
    m.meta = meta(std::uint32_t(rows[0].size()), std::uint32_t(rows.size()), gsd);
    for (const std::string& row : rows)
        for (char c : row)
            m.bits.push_back(c == 'X' ? 1 : 0);
    return m;
}

inline ConfidenceGrid uniform_grid(std::uint32_t w, std::uint32_t h, float value,
                                   float gsd = 1.0f) {
    ConfidenceGrid g;
    g.meta = meta(w, h, gsd);
    g.values.assign(std::size_t(w) * h, value);
    return g;
}

inline BinaryMask random_mask(std::mt19937& rng, std::uint32_t max_side,
                              double fg_prob = 0.4) {
    std::uniform_int_distribution<std::uint32_t> side(1, max_side);
    std::bernoulli_distribution fg(fg_prob);
    BinaryMask m;
    m.meta = meta(side(rng), side(rng));
    m.bits.resize(m.meta.pixel_count());
    for (auto& b : m.bits)
        b = fg(rng) ? 1 : 0;
    return m;
}

// Axis-aligned block of pixels as a sorted pixel-key set.
inline PixelSet block(std::uint32_t x0, std::uint32_t y0, std::uint32_t w, std::uint32_t h) {
    PixelSet s;
    for (std::uint32_t y = y0; y < y0 + h; ++y)
        for (std::uint32_t x = x0; x < x0 + w; ++x)
            s.push_back(pixel_key(x, y));
    return s;
}

inline DetectedObject pred(int id, double confidence, PixelSet pixels) {
    DetectedObject o;
    o.id = id;
    o.confidence = confidence;
    o.pixels = std::move(pixels);
    o.area_px = o.pixels.size();
    return o;
}

inline GroundTruthObject truth(int id, PixelSet pixels, double gsd = 1.0) {
    GroundTruthObject o;
    o.id = id;
    o.pixels = std::move(pixels);
    o.area_px = o.pixels.size();
    o.area_m2 = double(o.area_px) * gsd * gsd;
    return o;
}

inline PolygonAnnotation polygon(int id, std::vector<Vertex> vertices) {
    PolygonAnnotation p;
    p.id = id;
    p.vertices = std::move(vertices);
    return p;
}

} // namespace shs::test
