#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "shs/runner.hpp"
#include "shs/version.hpp"

namespace {

std::vector<double> parse_area_list(const std::string& csv) {
    std::vector<double> areas;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            areas.push_back(std::stod(item));
        } catch (const std::logic_error&) {
            throw shs::ArgumentError("bad area value: " + item);
        }
    }
    return areas;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solar-home-system detection evaluation and UAV survey cost toolkit"};
    app.set_version_flag("--version", shs::kVersion);
    app.require_subcommand(1);

    shs::EvalOptions eval;
    std::string group_by;
    std::string pairs_file;
    auto* cmd_eval = app.add_subcommand(
        "eval", "Score confidence maps against polygon annotations");
    cmd_eval->add_option("--pred-dir", eval.pred_dir, "Directory of .fgrid/.pgm confidence maps")
        ->required();
    cmd_eval->add_option("--truth-dir", eval.truth_dir, "Directory of annotation .json files")
        ->required();
    cmd_eval->add_option("--out", eval.out_dir, "Output directory")->required();
    cmd_eval->add_option("--iou", eval.scoring.iou_min, "Minimum IoU for a match");
    cmd_eval->add_option("--tau-seed", eval.postprocess.tau_seed, "S1 confidence threshold");
    cmd_eval->add_option("--min-area-m2", eval.postprocess.min_area_m2,
                         "S3 minimum object area in m^2");
    cmd_eval->add_option("--dilate-px", eval.postprocess.dilation_radius_px,
                         "S4 dilation radius in pixels");
    cmd_eval->add_option("--connectivity", eval.postprocess.connectivity,
                         "Pixel connectivity (4 or 8)");
    cmd_eval->add_option("--jobs", eval.jobs, "Worker threads (default: machine parallelism)");
    cmd_eval->add_option("--group-by", group_by, "Emit one curve per value of 'tag'");
    cmd_eval->add_option("--pairs", pairs_file, "CSV of truth_path,pred_path overrides");

    shs::GsdSimOptions gsd;
    auto* cmd_gsd = app.add_subcommand("gsd-sim", "Simulate a coarser sensor resolution");
    cmd_gsd->add_option("--input", gsd.input, "FGRID/PGM/PPM input")->required();
    cmd_gsd->add_option("--output", gsd.output, "Output path (same format)")->required();
    cmd_gsd->add_option("--target-gsd", gsd.target_gsd_m, "Target GSD in meters/pixel")
        ->required();
    double source_gsd = 0.0;
    auto* source_opt =
        cmd_gsd->add_option("--source-gsd", source_gsd,
                            "Source GSD override (required for PGM/PPM input)");

    shs::CostOptions cost;
    std::string cost_curve_list;
    auto* cmd_cost = app.add_subcommand("cost", "Estimate UAV mission cost");
    cmd_cost->add_option("--area", cost.area_km2, "Mission area in km^2")->required();
    cmd_cost->add_option("--gsd", cost.gsd_m, "Imagery GSD in meters/pixel")->required();
    cmd_cost->add_option("--assumptions", cost.assumptions_file,
                         "Assumptions JSON (default: $SHS_ASSUMPTIONS or built-ins)");
    cmd_cost->add_option("--curve", cost_curve_list,
                         "Comma-separated areas for an additional cost_curve.csv");
    cmd_cost->add_option("--out", cost.out_dir, "Output directory");

    shs::CostCurveOptions curve;
    std::string curve_list;
    auto* cmd_curve = app.add_subcommand("cost-curve", "Total/unit cost across areas");
    cmd_curve->add_option("--gsd", curve.gsd_m, "Imagery GSD in meters/pixel")->required();
    cmd_curve->add_option("--areas", curve_list, "Comma-separated areas in km^2")->required();
    cmd_curve->add_option("--assumptions", curve.assumptions_file, "Assumptions JSON");
    cmd_curve->add_option("--out", curve.out_dir, "Output directory");

    shs::CompareOptions compare;
    auto* cmd_compare =
        app.add_subcommand("compare", "Compare UAV unit cost against platform quotes");
    cmd_compare->add_option("--area", compare.area_km2, "Mission area in km^2")->required();
    cmd_compare->add_option("--gsd", compare.gsd_m, "Imagery GSD in meters/pixel")->required();
    cmd_compare->add_option("--platforms", compare.platforms_file, "Platform quote JSON")
        ->required();
    cmd_compare->add_option("--assumptions", compare.assumptions_file, "Assumptions JSON");
    cmd_compare->add_option("--out", compare.out_dir, "Output directory");

    shs::RenderOptions render;
    auto* cmd_render = app.add_subcommand("render", "Render a TP/FP/FN confusion image");
    cmd_render->add_option("--pred", render.pred_file, "Detected-objects JSON")->required();
    cmd_render->add_option("--truth", render.truth_file, "Annotation JSON")->required();
    cmd_render->add_option("--output", render.output, "Output PPM")->required();
    cmd_render->add_option("--tau", render.tau, "Operating confidence threshold");
    cmd_render->add_option("--iou", render.scoring.iou_min, "Minimum IoU for a match");

    shs::RasterizeOptions rast;
    auto* cmd_rast =
        app.add_subcommand("rasterize", "Rasterize annotations to a PGM union mask");
    cmd_rast->add_option("--truth", rast.truth_file, "Annotation JSON")->required();
    cmd_rast->add_option("--output", rast.output, "Output PGM")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? shs::kExitOk : shs::kExitUsage;
    }

    try {
        if (cmd_eval->parsed()) {
            if (!group_by.empty()) {
                if (group_by != "tag")
                    throw shs::ArgumentError("--group-by supports only \"tag\"");
                eval.group_by_tag = true;
            }
            if (!pairs_file.empty())
                eval.pairs_file = pairs_file;
            shs::run_eval(eval);
        } else if (cmd_gsd->parsed()) {
            if (source_opt->count() > 0)
                gsd.source_gsd_m = source_gsd;
            shs::run_gsd_sim(gsd);
        } else if (cmd_cost->parsed()) {
            if (!cost_curve_list.empty())
                cost.curve_areas = parse_area_list(cost_curve_list);
            shs::run_cost(cost);
        } else if (cmd_curve->parsed()) {
            curve.areas = parse_area_list(curve_list);
            shs::run_cost_curve(curve);
        } else if (cmd_compare->parsed()) {
            shs::run_compare(compare);
        } else if (cmd_render->parsed()) {
            shs::run_render(render);
        } else if (cmd_rast->parsed()) {
            shs::run_rasterize(rast);
        }
    } catch (const shs::EmptyTruthError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return shs::kExitEmptyTruth;
    } catch (const shs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return shs::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return shs::kExitInternal;
    }
    return shs::kExitOk;
}
