#pragma once

#include <span>
#include <vector>

#include "shs/annotate.hpp"
#include "shs/detect.hpp"
#include "shs/io.hpp"

namespace shs {

struct ScoringParams {
    double iou_min = 0.2;   // a prediction matches a truth at IoU >= iou_min

    void validate() const {
        if (!(iou_min > 0.0 && iou_min <= 1.0))
            throw ArgumentError("iou_min must lie in (0,1]");
    }
};

struct MatchRecord {
    int pred_id = 0;
    int truth_id = 0;
    double iou = 0.0;
};

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn_ = 0;
    std::vector<MatchRecord> matches;
};

struct PRPoint {
    double tau = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

// PR sweep over the distinct prediction confidences, tau strictly decreasing.
struct PRCurve {
    std::vector<PRPoint> points;
    double r_max = 0.0;   // recall at the smallest tau
    double ap = 0.0;      // rectangle-rule area under P(r), truncated at r_max
    double f1_max = 0.0;  // max over points of 2PR/(P+R)
};

// |a n b| / |a u b| over sorted pixel-key sets.
double iou(const PixelSet& a, const PixelSet& b);

// Object-wise confusion at operating threshold tau: predictions with
// confidence >= tau are greedily assigned in descending-confidence order
// (ties by ascending id) to the unmatched truth of highest IoU (ties by
// ascending truth id), accepted when IoU >= iou_min.
Confusion match(const std::vector<DetectedObject>& preds,
                const std::vector<GroundTruthObject>& truths,
                const ScoringParams& params, double tau);

double f1_max(const PRCurve& curve);
double average_precision(const PRCurve& curve);

PRCurve pr_curve(const std::vector<DetectedObject>& preds,
                 const std::vector<GroundTruthObject>& truths,
                 const ScoringParams& params);

// Dataset-level curve: predictions only ever match truths of their own
// image; tp/fp are pooled across images at each tau.
struct ImageObjects {
    std::vector<DetectedObject> preds;
    std::vector<GroundTruthObject> truths;
};
PRCurve pooled_pr_curve(std::span<const ImageObjects> images, const ScoringParams& params);

// TP prediction pixels green, FP red, FN truth pixels orange, background
// black; overlap precedence TP > FN > FP.
RgbImage render_confusion(const std::vector<DetectedObject>& preds,
                          const std::vector<GroundTruthObject>& truths,
                          const ScoringParams& params, double tau, const GeoMeta& meta);

} // namespace shs
