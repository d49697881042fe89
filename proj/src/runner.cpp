#include "shs/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "shs/costmodel.hpp"
#include "shs/resample.hpp"
#include "shs/version.hpp"

namespace fs = std::filesystem;

namespace shs {

namespace {

double round6(double v) {
    return std::round(v * 1e6) / 1e6;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out)
        throw IoError("write failed: " + path.string());
}

void write_manifest(const fs::path& path, const std::string& command,
                    std::vector<std::string> inputs, const nlohmann::json& params) {
    std::sort(inputs.begin(), inputs.end());
    nlohmann::json m;
    m["command"] = command;
    m["inputs"] = inputs;
    m["params"] = params;
    m["version"] = kVersion;
    m["timestamp"] = utc_timestamp();
    write_text(path, m.dump(2) + "\n");
}

std::string curve_csv(const PRCurve& curve) {
    std::string csv = "tau,precision,recall\n";
    for (const PRPoint& pt : curve.points)
        csv += fmt6(pt.tau) + "," + fmt6(pt.precision) + "," + fmt6(pt.recall) + "\n";
    return csv;
}

std::string summary_json(const PRCurve& curve, double iou_min, std::size_t n_truth,
                         std::size_t n_pred) {
    nlohmann::json j;
    j["ap"] = round6(curve.ap);
    j["f1_max"] = round6(curve.f1_max);
    j["r_max"] = round6(curve.r_max);
    j["iou_min"] = iou_min;
    j["n_truth"] = n_truth;
    j["n_pred"] = n_pred;
    return j.dump(2) + "\n";
}

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s)
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'
                          ? c
                          : '_');
    return out.empty() ? std::string("untagged") : out;
}

struct EvalPair {
    std::string stem;
    fs::path truth;
    fs::path pred;
};

std::vector<EvalPair> pair_by_stem(const EvalOptions& opts) {
    std::vector<EvalPair> pairs;
    std::vector<std::string> missing;
    std::vector<fs::path> truth_files;
    for (const auto& entry : fs::directory_iterator(opts.truth_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            truth_files.push_back(entry.path());
    std::sort(truth_files.begin(), truth_files.end());

    for (const fs::path& truth : truth_files) {
        const std::string stem = truth.stem().string();
        fs::path pred;
        for (const char* ext : {".fgrid", ".pgm"}) {
            fs::path candidate = opts.pred_dir / (stem + ext);
            if (fs::exists(candidate)) {
                pred = candidate;
                break;
            }
        }
        if (pred.empty())
            missing.push_back(stem);
        else
            pairs.push_back({stem, truth, pred});
    }
    if (!missing.empty()) {
        std::string msg = "no prediction file for truth stem(s):";
        for (const std::string& s : missing)
            msg += " " + s;
        throw ArgumentError(msg);
    }
    if (pairs.empty())
        throw ArgumentError("no truth annotation files found in " +
                            opts.truth_dir.string());
    return pairs;
}

std::vector<EvalPair> pairs_from_csv(const fs::path& csv) {
    std::ifstream in(csv);
    if (!in)
        throw IoError("cannot open pairs file: " + csv.string());
    std::vector<EvalPair> pairs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw FormatError("pairs file line missing comma: " + line);
        EvalPair p;
        p.truth = line.substr(0, comma);
        p.pred = line.substr(comma + 1);
        p.stem = p.truth.stem().string();
        if (!fs::exists(p.truth) || !fs::exists(p.pred))
            throw ArgumentError("pair references missing file: " + line);
        pairs.push_back(std::move(p));
    }
    if (pairs.empty())
        throw ArgumentError("pairs file is empty: " + csv.string());
    return pairs;
}

struct ImageResult {
    std::string stem;
    std::string image_id;
    std::string tag;
    ImageObjects objects;
    std::vector<std::string> warnings;
    std::string objects_json;
};

ImageResult process_image(const EvalPair& pair, const EvalOptions& opts) {
    ImageResult r;
    r.stem = pair.stem;

    const AnnotationSet ann = parse_annotations(pair.truth);
    ConfidenceGrid grid = load_confidence_grid(pair.pred);
    if (grid.meta.width != ann.meta.width || grid.meta.height != ann.meta.height)
        throw ArgumentError("dimension mismatch between " + pair.pred.string() + " and " +
                            pair.truth.string());
    // The annotation is the geometry authority; PGM predictions carry no GSD
    // of their own.
    if (pair.pred.extension() != ".pgm" &&
        std::abs(double(grid.meta.gsd_m) - double(ann.meta.gsd_m)) >
            1e-6 * double(ann.meta.gsd_m))
        r.warnings.push_back("gsd mismatch for stem " + pair.stem + "; using annotation gsd");
    grid.meta.gsd_m = ann.meta.gsd_m;

    r.image_id = ann.image_id;
    r.tag = ann.meta.tag.value_or("untagged");
    r.objects.preds = postprocess(grid, opts.postprocess);

    TruthObjects truths = truth_objects(ann);
    for (int id : truths.dropped_ids)
        r.warnings.push_back("polygon " + std::to_string(id) + " in " + pair.stem +
                             " rasterized to zero pixels; dropped");
    r.objects.truths = std::move(truths.objects);
    r.objects_json = objects_to_json(r.image_id, ann.meta, r.objects.preds);
    return r;
}

} // namespace

void run_eval(const EvalOptions& opts) {
    opts.postprocess.validate();
    opts.scoring.validate();
    const std::vector<EvalPair> pairs =
        opts.pairs_file ? pairs_from_csv(*opts.pairs_file) : pair_by_stem(opts);

    fs::create_directories(opts.out_dir);
    fs::create_directories(opts.out_dir / "objects");

    // Worker pool over images; results land in per-index slots so output is
    // independent of scheduling.
    std::vector<ImageResult> results(pairs.size());
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned jobs =
        std::max(1u, std::min(opts.jobs == 0 ? hw : opts.jobs, unsigned(pairs.size())));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= pairs.size() || failed.load())
                return;
            try {
                results[i] = process_image(pairs[i], opts);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < jobs; ++t)
        threads.emplace_back(worker);
    for (auto& t : threads)
        t.join();
    if (error)
        std::rethrow_exception(error);

    std::sort(results.begin(), results.end(),
              [](const ImageResult& a, const ImageResult& b) { return a.stem < b.stem; });

    std::size_t total_truth = 0;
    for (const ImageResult& r : results) {
        for (const std::string& w : r.warnings)
            std::cerr << "warning: " << w << "\n";
        write_text(opts.out_dir / "objects" / (r.stem + ".json"), r.objects_json);
        total_truth += r.objects.truths.size();
    }
    if (total_truth == 0)
        throw EmptyTruthError("ground truth contains no objects");

    std::vector<std::string> inputs;
    for (const EvalPair& p : pairs) {
        inputs.push_back(p.truth.string());
        inputs.push_back(p.pred.string());
    }

    if (opts.group_by_tag) {
        std::map<std::string, std::vector<ImageObjects>> groups;
        for (const ImageResult& r : results)
            groups[r.tag].push_back(r.objects);
        for (const auto& [tag, images] : groups) {
            std::size_t n_truth = 0, n_pred = 0;
            for (const ImageObjects& img : images) {
                n_truth += img.truths.size();
                n_pred += img.preds.size();
            }
            const std::string safe = sanitize(tag);
            if (n_truth == 0) {
                std::cerr << "warning: group \"" << tag
                          << "\" has no ground-truth objects; skipped\n";
                continue;
            }
            const PRCurve curve = pooled_pr_curve(images, opts.scoring);
            write_text(opts.out_dir / ("pr_curve_" + safe + ".csv"), curve_csv(curve));
            write_text(opts.out_dir / ("summary_" + safe + ".json"),
                       summary_json(curve, opts.scoring.iou_min, n_truth, n_pred));
        }
    } else {
        std::vector<ImageObjects> images;
        std::size_t n_pred = 0;
        for (const ImageResult& r : results) {
            images.push_back(r.objects);
            n_pred += r.objects.preds.size();
        }
        const PRCurve curve = pooled_pr_curve(images, opts.scoring);
        write_text(opts.out_dir / "pr_curve.csv", curve_csv(curve));
        write_text(opts.out_dir / "summary.json",
                   summary_json(curve, opts.scoring.iou_min, total_truth, n_pred));
    }

    nlohmann::json params;
    params["iou_min"] = opts.scoring.iou_min;
    params["tau_seed"] = opts.postprocess.tau_seed;
    params["min_area_m2"] = opts.postprocess.min_area_m2;
    params["dilate_px"] = opts.postprocess.dilation_radius_px;
    params["connectivity"] = opts.postprocess.connectivity;
    params["group_by_tag"] = opts.group_by_tag;
    write_manifest(opts.out_dir / "manifest.json", "eval", std::move(inputs), params);
}

void run_gsd_sim(const GsdSimOptions& opts) {
    std::ifstream probe(opts.input, std::ios::binary);
    if (!probe)
        throw IoError("cannot open for reading: " + opts.input.string());
    char magic[2] = {0, 0};
    probe.read(magic, 2);
    probe.close();

    const ResampleSpec spec{opts.target_gsd_m};
    if (magic[0] == 'P' && magic[1] == '6') {
        if (!opts.source_gsd_m)
            throw ArgumentError("--source-gsd is required for PPM input");
        RgbImage img = load_ppm(opts.input);
        img.meta.gsd_m = float(*opts.source_gsd_m);
        save_ppm(simulate_gsd(img, spec), opts.output);
    } else {
        ConfidenceGrid grid = load_confidence_grid(opts.input);
        const bool is_pgm = magic[0] == 'P' && magic[1] == '5';
        if (is_pgm && !opts.source_gsd_m)
            throw ArgumentError("--source-gsd is required for PGM input");
        if (opts.source_gsd_m)
            grid.meta.gsd_m = float(*opts.source_gsd_m);
        save_confidence_grid(simulate_gsd(grid, spec), opts.output);
    }

    nlohmann::json params;
    params["target_gsd_m"] = opts.target_gsd_m;
    if (opts.source_gsd_m)
        params["source_gsd_m"] = *opts.source_gsd_m;
    write_manifest(fs::path(opts.output.string() + ".manifest.json"), "gsd-sim",
                   {opts.input.string()}, params);
}

std::pair<CostAssumptions, std::string>
resolve_assumptions(const std::optional<fs::path>& file) {
    if (file)
        return {load_assumptions(*file), file->string()};
    if (const char* env = std::getenv("SHS_ASSUMPTIONS"); env && *env)
        return {load_assumptions(env), std::string(env)};
    return {CostAssumptions{}, "builtin"};
}

namespace {

std::string cost_breakdown_json(const CostBreakdown& b) {
    nlohmann::json j;
    j["day_tot"] = round6(b.day_tot);
    j["n_pilots"] = b.n_pilots;
    j["fixed"] = round6(b.fixed);
    j["human"] = round6(b.human);
    j["drone"] = round6(b.drone);
    j["fuel"] = round6(b.fuel);
    j["storage"] = round6(b.storage);
    j["total"] = round6(b.total);
    j["unit_cost"] = round6(b.unit_cost);
    j["hotel_share"] = round6(b.hotel_share);
    return j.dump(2) + "\n";
}

std::string cost_curve_csv(const std::vector<CurvePoint>& points) {
    std::string csv = "area_km2,total_usd,unit_cost_usd_per_km2\n";
    for (const CurvePoint& p : points)
        csv += fmt6(p.area_km2) + "," + fmt6(p.total_usd) + "," +
               fmt6(p.unit_cost_usd_km2) + "\n";
    return csv;
}

} // namespace

void run_cost(const CostOptions& opts) {
    auto [assumptions, source] = resolve_assumptions(opts.assumptions_file);
    MissionSpec spec;
    spec.area_km2 = opts.area_km2;
    spec.gsd_m = opts.gsd_m;

    fs::create_directories(opts.out_dir);
    write_text(opts.out_dir / "cost_breakdown.json",
               cost_breakdown_json(estimate(spec, assumptions)));
    if (!opts.curve_areas.empty())
        write_text(opts.out_dir / "cost_curve.csv",
                   cost_curve_csv(unit_cost_curve(opts.gsd_m, opts.curve_areas, assumptions)));

    nlohmann::json params;
    params["area_km2"] = opts.area_km2;
    params["gsd_m"] = opts.gsd_m;
    params["assumptions"] = source;
    if (!opts.curve_areas.empty())
        params["curve_areas"] = opts.curve_areas;
    write_manifest(opts.out_dir / "manifest.json", "cost",
                   source == "builtin" ? std::vector<std::string>{}
                                       : std::vector<std::string>{source},
                   params);
}

void run_cost_curve(const CostCurveOptions& opts) {
    if (opts.areas.empty())
        throw ArgumentError("cost-curve requires at least one area");
    auto [assumptions, source] = resolve_assumptions(opts.assumptions_file);

    fs::create_directories(opts.out_dir);
    write_text(opts.out_dir / "cost_curve.csv",
               cost_curve_csv(unit_cost_curve(opts.gsd_m, opts.areas, assumptions)));

    nlohmann::json params;
    params["gsd_m"] = opts.gsd_m;
    params["areas"] = opts.areas;
    params["assumptions"] = source;
    write_manifest(opts.out_dir / "manifest.json", "cost-curve",
                   source == "builtin" ? std::vector<std::string>{}
                                       : std::vector<std::string>{source},
                   params);
}

void run_compare(const CompareOptions& opts) {
    auto [assumptions, source] = resolve_assumptions(opts.assumptions_file);
    const std::vector<PlatformQuote> platforms = load_platforms(opts.platforms_file);
    MissionSpec spec;
    spec.area_km2 = opts.area_km2;
    spec.gsd_m = opts.gsd_m;
    const PlatformComparison cmp = compare_platforms(spec, assumptions, platforms);

    std::string csv = "name,gsd_m,unit_cost_usd_km2,break_even_area_km2\n";
    csv += "UAV," + fmt6(opts.gsd_m) + "," + fmt6(cmp.uav_unit_cost_usd_km2) + ",\n";
    for (const PlatformRow& row : cmp.rows) {
        csv += row.quote.name + "," + fmt6(row.quote.gsd_m) + "," +
               fmt6(row.quote.unit_cost_usd_km2) + ",";
        csv += row.break_even_area_km2 ? fmt6(*row.break_even_area_km2)
                                       : std::string("never");
        csv += "\n";
    }
    fs::create_directories(opts.out_dir);
    write_text(opts.out_dir / "comparison.csv", csv);

    nlohmann::json params;
    params["area_km2"] = opts.area_km2;
    params["gsd_m"] = opts.gsd_m;
    params["assumptions"] = source;
    std::vector<std::string> inputs{opts.platforms_file.string()};
    if (source != "builtin")
        inputs.push_back(source);
    write_manifest(opts.out_dir / "manifest.json", "compare", std::move(inputs), params);
}

void run_render(const RenderOptions& opts) {
    const AnnotationSet ann = parse_annotations(opts.truth_file);
    const ObjectFile preds = load_objects_json(opts.pred_file.string());
    if (preds.meta.width != ann.meta.width || preds.meta.height != ann.meta.height)
        throw ArgumentError("dimension mismatch between " + opts.pred_file.string() +
                            " and " + opts.truth_file.string());
    const TruthObjects truths = truth_objects(ann);
    save_ppm(render_confusion(preds.objects, truths.objects, opts.scoring, opts.tau,
                              ann.meta),
             opts.output);

    nlohmann::json params;
    params["tau"] = opts.tau;
    params["iou_min"] = opts.scoring.iou_min;
    write_manifest(fs::path(opts.output.string() + ".manifest.json"), "render",
                   {opts.pred_file.string(), opts.truth_file.string()}, params);
}

void run_rasterize(const RasterizeOptions& opts) {
    const AnnotationSet ann = parse_annotations(opts.truth_file);
    BinaryMask combined;
    combined.meta = ann.meta;
    combined.bits.assign(ann.meta.pixel_count(), 0);
    for (const PolygonAnnotation& poly : ann.polygons) {
        const BinaryMask mask = rasterize(poly, ann.meta);
        for (std::size_t i = 0; i < mask.bits.size(); ++i)
            combined.bits[i] |= mask.bits[i];
    }
    save_mask_pgm(combined, opts.output);

    write_manifest(fs::path(opts.output.string() + ".manifest.json"), "rasterize",
                   {opts.truth_file.string()}, nlohmann::json::object());
}

} // namespace shs
