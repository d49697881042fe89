#include "shs/resample.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace shs {

namespace {

// Cell count for a box downsample: ceil(extent/factor), with quotients
// within 1e-9 (relative) of an integer snapped first. The snap keeps
// mathematically exact divisions from spilling a dust-width sliver cell,
// which would skew the upsample geometry.
std::uint32_t cell_count(std::uint32_t extent, double factor) {
    double q = double(extent) / factor;
    const double r = std::round(q);
    if (std::abs(q - r) < 1e-9 * std::max(1.0, std::abs(q)))
        q = r;
    return std::max<std::uint32_t>(1, std::uint32_t(std::ceil(q)));
}

std::vector<double> box_downsample(const std::vector<double>& src, std::uint32_t w,
                                   std::uint32_t h, double f, std::uint32_t w2,
                                   std::uint32_t h2) {
    std::vector<double> out(std::size_t(w2) * h2, 0.0);
    for (std::uint32_t j = 0; j < h2; ++j) {
        const double y0 = j * f;
        const double y1 = std::min((j + 1) * f, double(h));
        for (std::uint32_t i = 0; i < w2; ++i) {
            const double x0 = i * f;
            const double x1 = std::min((i + 1) * f, double(w));
            double sum = 0.0, wsum = 0.0;
            const auto ylo = std::uint32_t(std::floor(y0));
            const auto yhi = std::min<std::uint32_t>(h, std::uint32_t(std::ceil(y1)));
            const auto xlo = std::uint32_t(std::floor(x0));
            const auto xhi = std::min<std::uint32_t>(w, std::uint32_t(std::ceil(x1)));
            for (std::uint32_t y = ylo; y < yhi; ++y) {
                const double wy = std::min(double(y) + 1.0, y1) - std::max(double(y), y0);
                if (wy <= 0.0)
                    continue;
                for (std::uint32_t x = xlo; x < xhi; ++x) {
                    const double wx = std::min(double(x) + 1.0, x1) - std::max(double(x), x0);
                    if (wx <= 0.0)
                        continue;
                    sum += src[std::size_t(y) * w + x] * wx * wy;
                    wsum += wx * wy;
                }
            }
            out[std::size_t(j) * w2 + i] = wsum > 0.0 ? sum / wsum : 0.0;
        }
    }
    return out;
}

std::vector<double> bilinear_upsample(const std::vector<double>& small, std::uint32_t w2,
                                      std::uint32_t h2, std::uint32_t w, std::uint32_t h) {
    std::vector<double> out(std::size_t(w) * h, 0.0);
    for (std::uint32_t y = 0; y < h; ++y) {
        double v = (y + 0.5) * double(h2) / double(h) - 0.5;
        v = std::clamp(v, 0.0, double(h2) - 1.0);
        const auto y0 = std::uint32_t(std::floor(v));
        const auto y1 = std::min(y0 + 1, h2 - 1);
        const double fy = v - double(y0);
        for (std::uint32_t x = 0; x < w; ++x) {
            double u = (x + 0.5) * double(w2) / double(w) - 0.5;
            u = std::clamp(u, 0.0, double(w2) - 1.0);
            const auto x0 = std::uint32_t(std::floor(u));
            const auto x1 = std::min(x0 + 1, w2 - 1);
            const double fx = u - double(x0);
            out[std::size_t(y) * w + x] =
                small[std::size_t(y0) * w2 + x0] * (1.0 - fx) * (1.0 - fy) +
                small[std::size_t(y0) * w2 + x1] * fx * (1.0 - fy) +
                small[std::size_t(y1) * w2 + x0] * (1.0 - fx) * fy +
                small[std::size_t(y1) * w2 + x1] * fx * fy;
        }
    }
    return out;
}

double resolve_factor(double source_gsd, const ResampleSpec& spec) {
    if (!(source_gsd > 0.0))
        throw ArgumentError("source gsd must be positive");
    if (!(spec.target_gsd_m > 0.0))
        throw ArgumentError("target gsd must be positive");
    const double f = spec.target_gsd_m / source_gsd;
    if (f < 1.0)
        throw ArgumentError("target gsd must be at least the source gsd");
    return f;
}

std::vector<double> degrade_plane(const std::vector<double>& plane, std::uint32_t w,
                                  std::uint32_t h, double f) {
    const std::uint32_t w2 = cell_count(w, f);
    const std::uint32_t h2 = cell_count(h, f);
    return bilinear_upsample(box_downsample(plane, w, h, f, w2, h2), w2, h2, w, h);
}

} // namespace

ConfidenceGrid simulate_gsd(const ConfidenceGrid& grid, const ResampleSpec& spec) {
    grid.meta.validate();
    const double f = resolve_factor(double(grid.meta.gsd_m), spec);

    ConfidenceGrid out;
    out.meta = grid.meta;
    out.meta.effective_gsd_m = float(spec.target_gsd_m);
    if (f == 1.0) {
        out.values = grid.values;
        return out;
    }
    std::vector<double> plane(grid.values.begin(), grid.values.end());
    plane = degrade_plane(plane, grid.meta.width, grid.meta.height, f);
    out.values.resize(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i)
        out.values[i] = float(plane[i]);
    return out;
}

RgbImage simulate_gsd(const RgbImage& image, const ResampleSpec& spec) {
    image.meta.validate();
    const double f = resolve_factor(double(image.meta.gsd_m), spec);

    RgbImage out;
    out.meta = image.meta;
    out.meta.effective_gsd_m = float(spec.target_gsd_m);
    if (f == 1.0) {
        out.rgb = image.rgb;
        return out;
    }
    const std::size_t n = image.meta.pixel_count();
    out.rgb.resize(3 * n);
    std::vector<double> plane(n);
    for (int ch = 0; ch < 3; ++ch) {
        for (std::size_t i = 0; i < n; ++i)
            plane[i] = double(image.rgb[3 * i + std::size_t(ch)]);
        const auto degraded = degrade_plane(plane, image.meta.width, image.meta.height, f);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::clamp(std::round(degraded[i]), 0.0, 255.0);
            out.rgb[3 * i + std::size_t(ch)] = std::uint8_t(v);
        }
    }
    return out;
}

double effective_extent(double object_m, double gsd_m) {
    return object_m / gsd_m;
}

} // namespace shs
