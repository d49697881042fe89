#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "shs/grid.hpp"
#include "shs/pixelset.hpp"

namespace shs {

struct Vertex {
    double x = 0.0;   // pixels of the annotated image
    double y = 0.0;
};

// A simple (non-self-intersecting) polygon drawn around one solar panel.
struct PolygonAnnotation {
    int id = 0;
    std::string class_name = "solar_panel";
    std::vector<Vertex> vertices;   // length >= 3

    double signed_area_px2() const;
};

struct AnnotationSet {
    std::string image_id;
    GeoMeta meta;
    std::vector<PolygonAnnotation> polygons;
};

struct GroundTruthObject {
    int id = 0;
    PixelSet pixels;
    std::size_t area_px = 0;
    double area_m2 = 0.0;
};

struct TruthObjects {
    std::vector<GroundTruthObject> objects;
    std::vector<int> dropped_ids;   // polygons whose rasterization was empty
};

// Annotation JSON, one file per image:
//   {"image": "<id>", "width": W, "height": H, "gsd_m": g,
//    "polygons": [{"id": n, "class": "solar_panel", "vertices": [[x,y],...]}, ...]}
// An optional top-level "tag" string carries the GeoMeta grouping label.
AnnotationSet parse_annotations(const std::filesystem::path& path);
AnnotationSet parse_annotations_text(const std::string& text, const std::string& origin);
void save_annotations(const AnnotationSet& set, const std::filesystem::path& path);

// Validates simplicity (no self-intersections, spikes, or repeated points)
// and the 1-pixel bounding tolerance against the image frame.
void validate_polygon(const PolygonAnnotation& polygon, const GeoMeta& meta);

// Pixel-center rasterization under the even-odd rule: a pixel is foreground
// iff its center (x+0.5, y+0.5) is inside. Centers exactly on a boundary
// count as inside only for edges whose interior lies to the right/below
// (standard top-left fill convention).
BinaryMask rasterize(const PolygonAnnotation& polygon, const GeoMeta& meta);

// One ground-truth object per polygon; polygons are never merged, and those
// rasterizing to zero pixels are dropped into the warning list.
TruthObjects truth_objects(const AnnotationSet& set);

} // namespace shs
