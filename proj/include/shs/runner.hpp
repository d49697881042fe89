#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "shs/detect.hpp"
#include "shs/score.hpp"

namespace shs {

// Raised when the truth set contains no objects at all (exit code 3).
struct EmptyTruthError : Error {
    explicit EmptyTruthError(const std::string& msg) : Error(msg) {}
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;       // usage or input error
inline constexpr int kExitEmptyTruth = 3;
inline constexpr int kExitInternal = 4;

struct EvalOptions {
    std::filesystem::path pred_dir;
    std::filesystem::path truth_dir;
    std::filesystem::path out_dir = ".";
    std::optional<std::filesystem::path> pairs_file;   // CSV: truth_path,pred_path
    ScoringParams scoring;
    PostprocessParams postprocess;
    unsigned jobs = 0;            // 0 = machine parallelism
    bool group_by_tag = false;    // one curve per GeoMeta.tag
};
void run_eval(const EvalOptions& opts);

struct GsdSimOptions {
    std::filesystem::path input;
    std::filesystem::path output;
    double target_gsd_m = 0.0;
    std::optional<double> source_gsd_m;   // required for PGM/PPM inputs
};
void run_gsd_sim(const GsdSimOptions& opts);

struct CostOptions {
    double area_km2 = 0.0;
    double gsd_m = 0.0;
    std::optional<std::filesystem::path> assumptions_file;
    std::vector<double> curve_areas;      // optional extra cost_curve.csv
    std::filesystem::path out_dir = ".";
};
void run_cost(const CostOptions& opts);

struct CostCurveOptions {
    double gsd_m = 0.0;
    std::vector<double> areas;
    std::optional<std::filesystem::path> assumptions_file;
    std::filesystem::path out_dir = ".";
};
void run_cost_curve(const CostCurveOptions& opts);

struct CompareOptions {
    double area_km2 = 0.0;
    double gsd_m = 0.0;
    std::filesystem::path platforms_file;
    std::optional<std::filesystem::path> assumptions_file;
    std::filesystem::path out_dir = ".";
};
void run_compare(const CompareOptions& opts);

struct RenderOptions {
    std::filesystem::path pred_file;    // detected-objects JSON
    std::filesystem::path truth_file;   // annotation JSON
    std::filesystem::path output;       // PPM
    double tau = 0.5;
    ScoringParams scoring;
};
void run_render(const RenderOptions& opts);

struct RasterizeOptions {
    std::filesystem::path truth_file;
    std::filesystem::path output;       // PGM union mask
};
void run_rasterize(const RasterizeOptions& opts);

// Resolves the assumptions source: explicit file, then the SHS_ASSUMPTIONS
// environment variable, then built-in defaults. The returned string names
// the source for the run manifest.
std::pair<CostAssumptions, std::string>
resolve_assumptions(const std::optional<std::filesystem::path>& file);

} // namespace shs
