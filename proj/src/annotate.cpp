#include "shs/annotate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace shs {

namespace {

double cross(const Vertex& o, const Vertex& a, const Vertex& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Vertex& p, const Vertex& q, const Vertex& r) {
    return q.x <= std::max(p.x, r.x) && q.x >= std::min(p.x, r.x) &&
           q.y <= std::max(p.y, r.y) && q.y >= std::min(p.y, r.y);
}

int orientation(const Vertex& p, const Vertex& q, const Vertex& r) {
    const double v = cross(p, q, r);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

// Closed-segment intersection test, collinear overlap included.
bool segments_intersect(const Vertex& p1, const Vertex& p2,
                        const Vertex& q1, const Vertex& q2) {
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4)
        return true;
    if (o1 == 0 && on_segment(p1, q1, p2)) return true;
    if (o2 == 0 && on_segment(p1, q2, p2)) return true;
    if (o3 == 0 && on_segment(q1, p1, q2)) return true;
    if (o4 == 0 && on_segment(q1, p2, q2)) return true;
    return false;
}

} // namespace

double PolygonAnnotation::signed_area_px2() const {
    double acc = 0.0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vertex& a = vertices[i];
        const Vertex& b = vertices[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    return acc / 2.0;
}

void validate_polygon(const PolygonAnnotation& polygon, const GeoMeta& meta) {
    const auto& v = polygon.vertices;
    const std::size_t n = v.size();
    if (n < 3)
        throw FormatError("polygon " + std::to_string(polygon.id) +
                          " has fewer than 3 vertices");

    for (const Vertex& p : v) {
        if (p.x < -1.0 || p.x > double(meta.width) + 1.0 ||
            p.y < -1.0 || p.y > double(meta.height) + 1.0)
            throw GeometryError("polygon " + std::to_string(polygon.id) +
                                " vertex outside image bounds");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vertex& a = v[i];
        const Vertex& b = v[(i + 1) % n];
        if (a.x == b.x && a.y == b.y)
            throw GeometryError("polygon " + std::to_string(polygon.id) +
                                " has a zero-length edge");
    }
    // Spike: consecutive edges folding back along the same line.
    for (std::size_t i = 0; i < n; ++i) {
        const Vertex& prev = v[(i + n - 1) % n];
        const Vertex& cur = v[i];
        const Vertex& next = v[(i + 1) % n];
        if (orientation(prev, cur, next) == 0) {
            const double dot = (prev.x - cur.x) * (next.x - cur.x) +
                               (prev.y - cur.y) * (next.y - cur.y);
            if (dot > 0.0)
                throw GeometryError("polygon " + std::to_string(polygon.id) +
                                    " has a degenerate spike vertex");
        }
    }
    // Non-adjacent edges may not touch at all.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if (adjacent)
                continue;
            if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                throw GeometryError("polygon " + std::to_string(polygon.id) +
                                    " is self-intersecting");
        }
    }
}

BinaryMask rasterize(const PolygonAnnotation& polygon, const GeoMeta& meta) {
    meta.validate();
    if (polygon.vertices.size() < 3 || polygon.signed_area_px2() == 0.0)
        throw GeometryError("cannot rasterize degenerate polygon " +
                            std::to_string(polygon.id));

    BinaryMask mask;
    mask.meta = meta;
    mask.bits.assign(meta.pixel_count(), 0);

    const auto& v = polygon.vertices;
    const std::size_t n = v.size();
    double ymin = v[0].y, ymax = v[0].y;
    for (const Vertex& p : v) {
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const std::uint32_t row_lo =
        std::uint32_t(std::clamp(std::floor(ymin - 0.5), 0.0, double(meta.height)));
    const std::uint32_t row_hi =
        std::uint32_t(std::clamp(std::ceil(ymax + 0.5), 0.0, double(meta.height)));

    std::vector<double> xs;
    for (std::uint32_t y = row_lo; y < row_hi; ++y) {
        const double cy = y + 0.5;
        xs.clear();
        // Half-open [ymin, ymax) edge spans make vertex-on-scanline cases
        // count exactly once and give boundary centers the top-left rule.
        for (std::size_t i = 0; i < n; ++i) {
            const Vertex& a = v[i];
            const Vertex& b = v[(i + 1) % n];
            if (a.y == b.y)
                continue;
            const double lo = std::min(a.y, b.y);
            const double hi = std::max(a.y, b.y);
            if (lo <= cy && cy < hi)
                xs.push_back(a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y));
        }
        if (xs.empty())
            continue;
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            // Fill centers cx in [xs[k], xs[k+1]).
            const double first = std::ceil(xs[k] - 0.5);
            for (double px = std::max(first, 0.0); px + 0.5 < xs[k + 1]; px += 1.0) {
                if (px >= double(meta.width))
                    break;
                mask.bits[std::size_t(y) * meta.width + std::size_t(px)] = 1;
            }
        }
    }
    return mask;
}

TruthObjects truth_objects(const AnnotationSet& set) {
    TruthObjects out;
    const double pixel_area = set.meta.pixel_area_m2();
    for (const PolygonAnnotation& poly : set.polygons) {
        const BinaryMask mask = rasterize(poly, set.meta);
        GroundTruthObject obj;
        obj.id = poly.id;
        for (std::uint32_t y = 0; y < set.meta.height; ++y)
            for (std::uint32_t x = 0; x < set.meta.width; ++x)
                if (mask.at(x, y))
                    obj.pixels.push_back(pixel_key(x, y));
        if (obj.pixels.empty()) {
            out.dropped_ids.push_back(poly.id);
            continue;
        }
        obj.area_px = obj.pixels.size();
        obj.area_m2 = double(obj.area_px) * pixel_area;
        out.objects.push_back(std::move(obj));
    }
    return out;
}

AnnotationSet parse_annotations_text(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("malformed annotation JSON (" + origin + "): " + e.what());
    }

    AnnotationSet set;
    try {
        set.image_id = j.at("image").get<std::string>();
        set.meta.width = j.at("width").get<std::uint32_t>();
        set.meta.height = j.at("height").get<std::uint32_t>();
        set.meta.gsd_m = j.at("gsd_m").get<float>();
        if (j.contains("tag"))
            set.meta.tag = j.at("tag").get<std::string>();
        if (j.contains("altitude_m"))
            set.meta.altitude_m = j.at("altitude_m").get<float>();
        for (const auto& p : j.at("polygons")) {
            PolygonAnnotation poly;
            poly.id = p.at("id").get<int>();
            poly.class_name = p.at("class").get<std::string>();
            for (const auto& vtx : p.at("vertices")) {
                if (!vtx.is_array() || vtx.size() != 2)
                    throw FormatError("vertex must be an [x,y] pair (" + origin + ")");
                poly.vertices.push_back({vtx.at(0).get<double>(), vtx.at(1).get<double>()});
            }
            set.polygons.push_back(std::move(poly));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("annotation schema violation (" + origin + "): " + e.what());
    }

    try {
        set.meta.validate();
    } catch (const ArgumentError& e) {
        throw FormatError("annotation meta invalid (" + origin + "): " + e.what());
    }
    std::set<int> seen;
    for (const PolygonAnnotation& poly : set.polygons) {
        if (poly.class_name != "solar_panel")
            throw FormatError("unsupported class \"" + poly.class_name + "\" (" + origin + ")");
        if (!seen.insert(poly.id).second)
            throw FormatError("duplicate polygon id " + std::to_string(poly.id) +
                              " (" + origin + ")");
        validate_polygon(poly, set.meta);
    }
    return set;
}

AnnotationSet parse_annotations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open for reading: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_annotations_text(buf.str(), path.string());
}

void save_annotations(const AnnotationSet& set, const std::filesystem::path& path) {
    nlohmann::json j;
    j["image"] = set.image_id;
    j["width"] = set.meta.width;
    j["height"] = set.meta.height;
    j["gsd_m"] = set.meta.gsd_m;
    if (set.meta.tag)
        j["tag"] = *set.meta.tag;
    if (set.meta.altitude_m)
        j["altitude_m"] = *set.meta.altitude_m;
    j["polygons"] = nlohmann::json::array();
    for (const PolygonAnnotation& poly : set.polygons) {
        nlohmann::json p;
        p["id"] = poly.id;
        p["class"] = poly.class_name;
        p["vertices"] = nlohmann::json::array();
        for (const Vertex& v : poly.vertices)
            p["vertices"].push_back({v.x, v.y});
        j["polygons"].push_back(std::move(p));
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    out << j.dump(2) << "\n";
    if (!out)
        throw IoError("write failed: " + path.string());
}

} // namespace shs
