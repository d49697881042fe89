#include "shs/score.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace shs {

double iou(const PixelSet& a, const PixelSet& b) {
    if (a.empty() || b.empty())
        throw ArgumentError("iou of an empty pixel set is undefined");
    std::size_t inter = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib)
            ++ia;
        else if (*ib < *ia)
            ++ib;
        else {
            ++inter;
            ++ia;
            ++ib;
        }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    return double(inter) / double(uni);
}

Confusion match(const std::vector<DetectedObject>& preds,
                const std::vector<GroundTruthObject>& truths,
                const ScoringParams& params, double tau) {
    params.validate();

    std::vector<const DetectedObject*> live;
    for (const auto& p : preds)
        if (p.confidence >= tau)
            live.push_back(&p);
    std::sort(live.begin(), live.end(), [](const DetectedObject* a, const DetectedObject* b) {
        if (a->confidence != b->confidence)
            return a->confidence > b->confidence;
        return a->id < b->id;
    });

    Confusion c;
    std::vector<bool> taken(truths.size(), false);
    for (const DetectedObject* p : live) {
        double best = 0.0;
        std::size_t best_t = truths.size();
        for (std::size_t t = 0; t < truths.size(); ++t) {
            if (taken[t])
                continue;
            const double v = iou(p->pixels, truths[t].pixels);
            if (v > best || (v == best && v > 0.0 && best_t != truths.size() &&
                             truths[t].id < truths[best_t].id)) {
                best = v;
                best_t = t;
            }
        }
        if (best_t != truths.size() && best >= params.iou_min) {
            taken[best_t] = true;
            c.matches.push_back({p->id, truths[best_t].id, best});
        }
    }
    c.tp = c.matches.size();
    c.fp = live.size() - c.tp;
    c.fn_ = truths.size() - c.tp;
    return c;
}

double f1_max(const PRCurve& curve) {
    double best = 0.0;
    for (const PRPoint& pt : curve.points) {
        const double denom = pt.precision + pt.recall;
        const double f1 = denom > 0.0 ? 2.0 * pt.precision * pt.recall / denom : 0.0;
        best = std::max(best, f1);
    }
    return best;
}

double average_precision(const PRCurve& curve) {
    double area = 0.0;
    double prev_recall = 0.0;
    for (const PRPoint& pt : curve.points) {
        area += pt.precision * (pt.recall - prev_recall);
        prev_recall = pt.recall;
    }
    return area;
}

PRCurve pooled_pr_curve(std::span<const ImageObjects> images, const ScoringParams& params) {
    params.validate();
    std::size_t total_truths = 0;
    for (const ImageObjects& img : images)
        total_truths += img.truths.size();
    if (total_truths == 0)
        throw ArgumentError("pr_curve requires at least one ground-truth object");

    std::set<double, std::greater<double>> taus;
    for (const ImageObjects& img : images)
        for (const DetectedObject& p : img.preds)
            taus.insert(p.confidence);

    PRCurve curve;
    for (double tau : taus) {
        std::size_t tp = 0, fp = 0;
        for (const ImageObjects& img : images) {
            const Confusion c = match(img.preds, img.truths, params, tau);
            tp += c.tp;
            fp += c.fp;
        }
        PRPoint pt;
        pt.tau = tau;
        pt.precision = tp + fp > 0 ? double(tp) / double(tp + fp) : 1.0;
        pt.recall = double(tp) / double(total_truths);
        curve.points.push_back(pt);
    }
    curve.r_max = curve.points.empty() ? 0.0 : curve.points.back().recall;
    curve.ap = average_precision(curve);
    curve.f1_max = f1_max(curve);
    return curve;
}

PRCurve pr_curve(const std::vector<DetectedObject>& preds,
                 const std::vector<GroundTruthObject>& truths,
                 const ScoringParams& params) {
    const ImageObjects single{preds, truths};
    return pooled_pr_curve(std::span<const ImageObjects>(&single, 1), params);
}

RgbImage render_confusion(const std::vector<DetectedObject>& preds,
                          const std::vector<GroundTruthObject>& truths,
                          const ScoringParams& params, double tau, const GeoMeta& meta) {
    meta.validate();
    const Confusion c = match(preds, truths, params, tau);

    RgbImage img;
    img.meta = meta;
    img.rgb.assign(3 * meta.pixel_count(), 0);

    auto paint = [&](const PixelSet& pixels, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        for (PixelKey k : pixels) {
            const std::uint32_t x = pixel_x(k);
            const std::uint32_t y = pixel_y(k);
            if (x >= meta.width || y >= meta.height)
                throw ArgumentError("object pixel outside render dimensions");
            std::uint8_t* px = img.pixel(x, y);
            px[0] = r;
            px[1] = g;
            px[2] = b;
        }
    };

    std::set<int> matched_preds, matched_truths;
    for (const MatchRecord& m : c.matches) {
        matched_preds.insert(m.pred_id);
        matched_truths.insert(m.truth_id);
    }
    // Paint order encodes the TP > FN > FP precedence.
    for (const DetectedObject& p : preds)
        if (p.confidence >= tau && !matched_preds.count(p.id))
            paint(p.pixels, 255, 0, 0);            // FP red
    for (const GroundTruthObject& t : truths)
        if (!matched_truths.count(t.id))
            paint(t.pixels, 255, 165, 0);          // FN orange
    for (const DetectedObject& p : preds)
        if (matched_preds.count(p.id))
            paint(p.pixels, 0, 255, 0);            // TP green
    return img;
}

} // namespace shs
