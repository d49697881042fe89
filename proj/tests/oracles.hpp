#pragma once

// Brute-force reference implementations used only by tests. These stay
// deliberately naive and independent of the library's algorithms: recursive
// flood fill for component labeling, full assignment enumeration for
// matching.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "shs/detect.hpp"
#include "shs/grid.hpp"
#include "shs/score.hpp"

namespace shs::test {

using PixelGroup = std::vector<std::size_t>;          // sorted linear indices
using GroupSet = std::set<PixelGroup>;                // order-free comparison

// BFS flood fill from each unvisited foreground pixel.
inline GroupSet flood_fill_components(const BinaryMask& mask, int connectivity) {
    const std::int64_t w = mask.meta.width;
    const std::int64_t h = mask.meta.height;
    std::vector<bool> seen(mask.bits.size(), false);
    GroupSet groups;
    for (std::int64_t start = 0; start < std::int64_t(mask.bits.size()); ++start) {
        if (!mask.bits[std::size_t(start)] || seen[std::size_t(start)])
            continue;
        PixelGroup group;
        std::vector<std::int64_t> stack{start};
        seen[std::size_t(start)] = true;
        while (!stack.empty()) {
            const std::int64_t i = stack.back();
            stack.pop_back();
            group.push_back(std::size_t(i));
            const std::int64_t x = i % w;
            const std::int64_t y = i / w;
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                for (std::int64_t dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0)
                        continue;
                    if (connectivity == 4 && dx != 0 && dy != 0)
                        continue;
                    const std::int64_t nx = x + dx;
                    const std::int64_t ny = y + dy;
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h)
                        continue;
                    const std::int64_t ni = ny * w + nx;
                    if (mask.bits[std::size_t(ni)] && !seen[std::size_t(ni)]) {
                        seen[std::size_t(ni)] = true;
                        stack.push_back(ni);
                    }
                }
            }
        }
        std::sort(group.begin(), group.end());
        groups.insert(std::move(group));
    }
    return groups;
}

inline GroupSet label_grid_groups(const LabelGrid& labels) {
    std::vector<PixelGroup> by_label(labels.num_labels);
    for (std::size_t i = 0; i < labels.labels.size(); ++i)
        if (labels.labels[i] != 0)
            by_label[labels.labels[i] - 1].push_back(i);
    GroupSet groups;
    for (auto& g : by_label)
        if (!g.empty())
            groups.insert(std::move(g));
    return groups;
}

// Reference for regroup: flood-fill the dilated mask, then split the
// pre-dilation foreground by dilated component membership.
inline GroupSet regroup_oracle(const LabelGrid& pre_labels, const BinaryMask& dilated,
                               int connectivity) {
    GroupSet merged;
    for (const PixelGroup& comp : flood_fill_components(dilated, connectivity)) {
        PixelGroup kept;
        for (std::size_t i : comp)
            if (pre_labels.labels[i] != 0)
                kept.push_back(i);
        if (!kept.empty())
            merged.insert(std::move(kept));
    }
    return merged;
}

// Reference for greedy matching: enumerate every one-to-one assignment of
// surviving predictions to truths (IoU >= iou_min), then select the one the
// descending-confidence preference order ranks first, i.e. the assignment
// whose per-prediction (iou, -truth_id) key sequence is lexicographically
// largest. Unmatched predictions rank below any accepted match.
struct OracleMatch {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::set<std::pair<int, int>> pairs;   // (pred_id, truth_id)
};

inline double oracle_iou(const PixelSet& a, const PixelSet& b) {
    std::set<PixelKey> sa(a.begin(), a.end());
    std::size_t inter = 0;
    for (PixelKey k : b)
        inter += sa.count(k);
    return double(inter) / double(a.size() + b.size() - inter);
}

inline OracleMatch exhaustive_match(const std::vector<DetectedObject>& preds,
                                    const std::vector<GroundTruthObject>& truths,
                                    double iou_min, double tau) {
    std::vector<const DetectedObject*> live;
    for (const auto& p : preds)
        if (p.confidence >= tau)
            live.push_back(&p);
    std::sort(live.begin(), live.end(), [](const DetectedObject* a, const DetectedObject* b) {
        if (a->confidence != b->confidence)
            return a->confidence > b->confidence;
        return a->id < b->id;
    });

    std::vector<std::vector<double>> ious(live.size(), std::vector<double>(truths.size()));
    for (std::size_t p = 0; p < live.size(); ++p)
        for (std::size_t t = 0; t < truths.size(); ++t)
            ious[p][t] = oracle_iou(live[p]->pixels, truths[t].pixels);

    using Key = std::pair<double, int>;   // (iou, -truth_id)
    std::vector<Key> best_seq, cur_seq;
    std::vector<int> best_assign, cur_assign(live.size(), -1);
    std::vector<bool> used(truths.size(), false);
    bool have_best = false;

    std::function<void(std::size_t)> recurse = [&](std::size_t p) {
        if (p == live.size()) {
            if (!have_best || cur_seq > best_seq) {
                best_seq = cur_seq;
                best_assign = cur_assign;
                have_best = true;
            }
            return;
        }
        for (std::size_t t = 0; t < truths.size(); ++t) {
            if (used[t] || ious[p][t] < iou_min)
                continue;
            used[t] = true;
            cur_assign[p] = int(t);
            cur_seq.push_back({ious[p][t], -truths[t].id});
            recurse(p + 1);
            cur_seq.pop_back();
            cur_assign[p] = -1;
            used[t] = false;
        }
        cur_seq.push_back({-1.0, 0});
        recurse(p + 1);
        cur_seq.pop_back();
    };
    recurse(0);

    OracleMatch out;
    for (std::size_t p = 0; p < live.size(); ++p) {
        if (best_assign.empty() || best_assign[p] < 0)
            continue;
        out.pairs.insert({live[p]->id, truths[std::size_t(best_assign[p])].id});
    }
    out.tp = out.pairs.size();
    out.fp = live.size() - out.tp;
    out.fn = truths.size() - out.tp;
    return out;
}

} // namespace shs::test
