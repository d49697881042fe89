#include "shs/detect.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace shs {

namespace {

// Union-find over provisional labels.
class DisjointSet {
public:
    std::uint32_t add() {
        parent_.push_back(std::uint32_t(parent_.size()));
        return parent_.back();
    }
    std::uint32_t find(std::uint32_t a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::uint32_t> parent_;
};

void check_connectivity(int connectivity) {
    if (connectivity != 4 && connectivity != 8)
        throw ArgumentError("connectivity must be 4 or 8");
}

// Renumbers arbitrary positive labels to contiguous 1..K in raster-scan
// order of first occurrence.
LabelGrid renumber(const GeoMeta& meta, const std::vector<std::uint32_t>& raw,
                   std::uint32_t raw_upper) {
    LabelGrid out;
    out.meta = meta;
    out.labels.assign(raw.size(), 0);
    std::vector<std::uint32_t> remap(std::size_t(raw_upper) + 1, 0);
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == 0)
            continue;
        if (remap[raw[i]] == 0)
            remap[raw[i]] = ++next;
        out.labels[i] = remap[raw[i]];
    }
    out.num_labels = next;
    return out;
}

} // namespace

void PostprocessParams::validate() const {
    if (!(tau_seed >= 0.0 && tau_seed <= 1.0))
        throw ArgumentError("tau_seed must lie in [0,1]");
    check_connectivity(connectivity);
    if (min_area_m2 < 0.0)
        throw ArgumentError("min_area_m2 must be nonnegative");
    if (dilation_radius_px < 0)
        throw ArgumentError("dilation_radius_px must be nonnegative");
}

std::size_t min_area_px(const PostprocessParams& params, double gsd_m) {
    if (!(gsd_m > 0.0))
        throw ArgumentError("gsd_m must be positive");
    return std::size_t(std::ceil(params.min_area_m2 / (gsd_m * gsd_m)));
}

LabelGrid connected_components(const BinaryMask& mask, int connectivity) {
    check_connectivity(connectivity);
    const std::uint32_t w = mask.meta.width;
    const std::uint32_t h = mask.meta.height;

    // Two-pass labeling: provisional labels with union-find, then a
    // renumbering pass that fixes the raster-scan ordering.
    std::vector<std::uint32_t> prov(mask.bits.size(), 0);
    DisjointSet ds;
    ds.add();   // slot 0 = background, never united
    for (std::uint32_t y = 0; y < h; ++y) {
        for (std::uint32_t x = 0; x < w; ++x) {
            const std::size_t i = std::size_t(y) * w + x;
            if (!mask.bits[i])
                continue;
            std::uint32_t neighbors[4];
            int n = 0;
            if (x > 0 && prov[i - 1])
                neighbors[n++] = prov[i - 1];
            if (y > 0) {
                const std::size_t up = i - w;
                if (prov[up])
                    neighbors[n++] = prov[up];
                if (connectivity == 8) {
                    if (x > 0 && prov[up - 1])
                        neighbors[n++] = prov[up - 1];
                    if (x + 1 < w && prov[up + 1])
                        neighbors[n++] = prov[up + 1];
                }
            }
            if (n == 0) {
                prov[i] = ds.add();
            } else {
                prov[i] = neighbors[0];
                for (int k = 1; k < n; ++k)
                    ds.unite(neighbors[0], neighbors[k]);
            }
        }
    }
    std::uint32_t upper = 0;
    for (auto& p : prov) {
        if (p) {
            p = ds.find(p);
            upper = std::max(upper, p);
        }
    }
    return renumber(mask.meta, prov, upper);
}

LabelGrid filter_small(const LabelGrid& labels, std::size_t min_area_px) {
    std::vector<std::size_t> area(std::size_t(labels.num_labels) + 1, 0);
    for (std::uint32_t l : labels.labels)
        ++area[l];

    std::vector<std::uint32_t> remap(std::size_t(labels.num_labels) + 1, 0);
    std::uint32_t next = 0;
    for (std::uint32_t l = 1; l <= labels.num_labels; ++l)
        if (area[l] >= min_area_px)
            remap[l] = ++next;

    LabelGrid out;
    out.meta = labels.meta;
    out.num_labels = next;
    out.labels.resize(labels.labels.size());
    for (std::size_t i = 0; i < labels.labels.size(); ++i)
        out.labels[i] = remap[labels.labels[i]];
    return out;
}

BinaryMask dilate(const BinaryMask& mask, int radius_px) {
    if (radius_px < 0)
        throw ArgumentError("dilation radius must be nonnegative");
    if (radius_px == 0)
        return mask;
    const std::int64_t w = mask.meta.width;
    const std::int64_t h = mask.meta.height;
    const std::int64_t r = radius_px;

    // The square element is separable: horizontal window-OR, then vertical.
    std::vector<std::uint8_t> tmp(mask.bits.size(), 0);
    for (std::int64_t y = 0; y < h; ++y) {
        const std::uint8_t* row = mask.bits.data() + y * w;
        std::uint8_t* out = tmp.data() + y * w;
        for (std::int64_t x = 0; x < w; ++x) {
            if (!row[x])
                continue;
            for (std::int64_t k = std::max<std::int64_t>(0, x - r);
                 k <= std::min(w - 1, x + r); ++k)
                out[k] = 1;
        }
    }
    BinaryMask result;
    result.meta = mask.meta;
    result.bits.assign(mask.bits.size(), 0);
    for (std::int64_t y = 0; y < h; ++y) {
        const std::uint8_t* row = tmp.data() + y * w;
        for (std::int64_t x = 0; x < w; ++x) {
            if (!row[x])
                continue;
            for (std::int64_t k = std::max<std::int64_t>(0, y - r);
                 k <= std::min(h - 1, y + r); ++k)
                result.bits[k * w + x] = 1;
        }
    }
    return result;
}

LabelGrid regroup(const LabelGrid& pre_labels, const BinaryMask& dilated_mask,
                  int connectivity) {
    check_connectivity(connectivity);
    if (pre_labels.meta.width != dilated_mask.meta.width ||
        pre_labels.meta.height != dilated_mask.meta.height)
        throw ArgumentError("regroup: label grid and dilated mask dimensions differ");
    for (std::size_t i = 0; i < pre_labels.labels.size(); ++i)
        if (pre_labels.labels[i] != 0 && !dilated_mask.bits[i])
            throw ArgumentError("regroup: pre-dilation support not covered by dilated mask");

    const LabelGrid dilated = connected_components(dilated_mask, connectivity);
    std::vector<std::uint32_t> merged(pre_labels.labels.size(), 0);
    for (std::size_t i = 0; i < merged.size(); ++i)
        if (pre_labels.labels[i] != 0)
            merged[i] = dilated.labels[i];
    return renumber(pre_labels.meta, merged, dilated.num_labels);
}

std::vector<DetectedObject> objects_from_labels(const LabelGrid& labels,
                                                const ConfidenceGrid& grid) {
    if (labels.labels.size() != grid.values.size())
        throw ArgumentError("label grid and confidence grid dimensions differ");
    std::vector<DetectedObject> objects(labels.num_labels);
    std::vector<double> sums(labels.num_labels, 0.0);
    const std::uint32_t w = labels.meta.width;
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
        const std::uint32_t l = labels.labels[i];
        if (l == 0)
            continue;
        DetectedObject& obj = objects[l - 1];
        obj.pixels.push_back(pixel_key(std::uint32_t(i % w), std::uint32_t(i / w)));
        sums[l - 1] += grid.values[i];
    }
    for (std::uint32_t l = 0; l < labels.num_labels; ++l) {
        objects[l].id = int(l) + 1;
        objects[l].area_px = objects[l].pixels.size();
        objects[l].confidence = sums[l] / double(objects[l].area_px);
    }
    return objects;
}

std::vector<DetectedObject> postprocess(const ConfidenceGrid& grid,
                                        const PostprocessParams& params) {
    params.validate();
    grid.meta.validate();

    const BinaryMask seed = threshold(grid, params.tau_seed);                  // S1
    const LabelGrid grouped = connected_components(seed, params.connectivity); // S2
    const LabelGrid kept = filter_small(grouped, min_area_px(params, grid.meta.gsd_m)); // S3

    BinaryMask support;
    support.meta = kept.meta;
    support.bits.resize(kept.labels.size());
    for (std::size_t i = 0; i < kept.labels.size(); ++i)
        support.bits[i] = kept.labels[i] != 0 ? 1 : 0;

    const BinaryMask grown = dilate(support, params.dilation_radius_px);       // S4
    const LabelGrid merged = regroup(kept, grown, params.connectivity);        // S5
    return objects_from_labels(merged, grid);
}

std::string objects_to_json(const std::string& image_id, const GeoMeta& meta,
                            const std::vector<DetectedObject>& objects) {
    nlohmann::json j;
    j["image"] = image_id;
    j["width"] = meta.width;
    j["height"] = meta.height;
    j["objects"] = nlohmann::json::array();
    for (const auto& obj : objects) {
        nlohmann::json o;
        o["id"] = obj.id;
        o["confidence"] = obj.confidence;
        o["area_px"] = obj.area_px;
        auto runs = pixels_to_rle(obj.pixels, meta.width);
        auto& rle = o["pixels_rle"] = nlohmann::json::array();
        for (const auto& [start, len] : runs)
            rle.push_back({start, len});
        j["objects"].push_back(std::move(o));
    }
    return j.dump(2) + "\n";
}

ObjectFile parse_objects_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        ObjectFile f;
        f.image_id = j.at("image").get<std::string>();
        f.meta.width = j.at("width").get<std::uint32_t>();
        f.meta.height = j.at("height").get<std::uint32_t>();
        f.meta.gsd_m = 1.0f;
        for (const auto& o : j.at("objects")) {
            DetectedObject obj;
            obj.id = o.at("id").get<int>();
            obj.confidence = o.at("confidence").get<double>();
            std::vector<std::pair<std::uint64_t, std::uint64_t>> runs;
            for (const auto& r : o.at("pixels_rle"))
                runs.emplace_back(r.at(0).get<std::uint64_t>(), r.at(1).get<std::uint64_t>());
            obj.pixels = rle_to_pixels(runs, f.meta.width);
            obj.area_px = obj.pixels.size();
            if (o.at("area_px").get<std::uint64_t>() != obj.area_px)
                throw FormatError("object area_px disagrees with pixels_rle");
            f.objects.push_back(std::move(obj));
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed objects JSON: ") + e.what());
    }
}

ObjectFile load_objects_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_objects_json(buf.str());
}

} // namespace shs
