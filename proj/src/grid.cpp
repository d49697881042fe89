#include "shs/grid.hpp"

#include <algorithm>
#include <array>

namespace shs {

void GeoMeta::validate() const {
    if (width < 1 || height < 1)
        throw ArgumentError("grid dimensions must be at least 1x1");
    if (!(gsd_m > 0.0f))
        throw ArgumentError("gsd_m must be positive");
}

BinaryMask threshold(const ConfidenceGrid& grid, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0))
        throw ArgumentError("threshold tau must lie in [0,1]");
    BinaryMask mask;
    mask.meta = grid.meta;
    mask.bits.resize(grid.values.size());
    for (std::size_t i = 0; i < grid.values.size(); ++i)
        mask.bits[i] = grid.values[i] >= tau ? 1 : 0;
    return mask;
}

namespace {
struct TableRow {
    double altitude_m;
    double gsd_m;
};
constexpr std::array<TableRow, 8> kAltitudeGsd{{
    {50.0, 0.017}, {60.0, 0.021}, {70.0, 0.025}, {80.0, 0.028},
    {90.0, 0.032}, {100.0, 0.035}, {110.0, 0.039}, {120.0, 0.043},
}};
} // namespace

GsdEstimate altitude_to_gsd(double altitude_m) {
    if (!(altitude_m > 0.0))
        throw ArgumentError("altitude must be positive");

    const auto& t = kAltitudeGsd;
    GsdEstimate out;
    std::size_t lo = 0;
    if (altitude_m <= t.front().altitude_m) {
        lo = 0;
        out.extrapolated = altitude_m < t.front().altitude_m;
    } else if (altitude_m >= t.back().altitude_m) {
        lo = t.size() - 2;
        out.extrapolated = altitude_m > t.back().altitude_m;
    } else {
        while (lo + 2 < t.size() && altitude_m >= t[lo + 1].altitude_m)
            ++lo;
    }
    // Exact at table rows so the calibration points reproduce bit-for-bit.
    for (const auto& row : t) {
        if (altitude_m == row.altitude_m) {
            out.gsd_m = row.gsd_m;
            return out;
        }
    }
    const TableRow& a = t[lo];
    const TableRow& b = t[lo + 1];
    const double w = (altitude_m - a.altitude_m) / (b.altitude_m - a.altitude_m);
    out.gsd_m = a.gsd_m + w * (b.gsd_m - a.gsd_m);
    return out;
}

} // namespace shs
