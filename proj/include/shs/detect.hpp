#pragma once

#include <string>
#include <vector>

#include "shs/grid.hpp"
#include "shs/pixelset.hpp"

namespace shs {

// Knobs for the confidence-map -> objects pipeline:
//   S1 threshold at tau_seed, S2 group connected pixels, S3 drop groups
//   smaller than min_area_m2, S4 dilate, S5 regroup the pre-dilation pixels
//   under the dilated connectivity.
struct PostprocessParams {
    double tau_seed = 0.5;
    int connectivity = 8;           // 4 or 8
    double min_area_m2 = 0.02;      // converted to pixels as ceil(min_area_m2 / gsd^2)
    int dilation_radius_px = 2;     // square structuring element of side 2r+1

    void validate() const;
};

// A candidate detection: a pixel group scored by the mean confidence of its
// member pixels.
struct DetectedObject {
    int id = 0;
    PixelSet pixels;
    std::size_t area_px = 0;
    double confidence = 0.0;
};

std::size_t min_area_px(const PostprocessParams& params, double gsd_m);

// Labels maximal connected foreground regions 1..K in raster-scan order of
// each region's first pixel.
LabelGrid connected_components(const BinaryMask& mask, int connectivity);

// Removes components with area < min_area_px; survivors are renumbered
// contiguously preserving their order.
LabelGrid filter_small(const LabelGrid& labels, std::size_t min_area_px);

// Morphological dilation by a Chebyshev ball (square of side 2*radius+1).
BinaryMask dilate(const BinaryMask& mask, int radius_px);

// Merges pre-dilation components that the dilated mask connects, without
// growing their support: each pre-dilation foreground pixel takes the id of
// its dilated component, then ids are renumbered contiguously.
LabelGrid regroup(const LabelGrid& pre_labels, const BinaryMask& dilated_mask,
                  int connectivity);

// Full S1..S5 pipeline plus per-object mean-confidence extraction.
std::vector<DetectedObject> postprocess(const ConfidenceGrid& grid,
                                        const PostprocessParams& params);

std::vector<DetectedObject> objects_from_labels(const LabelGrid& labels,
                                                const ConfidenceGrid& grid);

// Detected-object JSON: {"image": id, "width": W, "height": H, "objects":
// [{"id", "confidence", "area_px", "pixels_rle": [[start,len], ...]}]}.
// width/height ride along so the RLE is decodable standalone.
std::string objects_to_json(const std::string& image_id, const GeoMeta& meta,
                            const std::vector<DetectedObject>& objects);

struct ObjectFile {
    std::string image_id;
    GeoMeta meta;
    std::vector<DetectedObject> objects;
};
ObjectFile parse_objects_json(const std::string& text);
ObjectFile load_objects_json(const std::string& path);

} // namespace shs
