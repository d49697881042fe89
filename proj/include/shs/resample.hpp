#pragma once

#include "shs/grid.hpp"
#include "shs/io.hpp"

namespace shs {

// Target ground sampling distance for sensor-resolution simulation.
struct ResampleSpec {
    double target_gsd_m = 0.0;
};

// Degrades a grid to the effective resolution of a coarser sensor while
// keeping its pixel dimensions: area-average (box) downsample by
// f = target/source to a ceil(W/f) x ceil(H/f) grid, then bilinear upsample
// back to W x H. Box cells use fractional-area weights so non-integer
// factors behave like sensor integration. f = 1 is an exact identity.
// The result records effective_gsd_m = target; gsd_m (pixel pitch) is kept.
ConfidenceGrid simulate_gsd(const ConfidenceGrid& grid, const ResampleSpec& spec);
RgbImage simulate_gsd(const RgbImage& image, const ResampleSpec& spec);

// Size of an object in pixels at a given GSD: object_m / gsd_m.
double effective_extent(double object_m, double gsd_m);

} // namespace shs
