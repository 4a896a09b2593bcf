// barnmap: batch pipeline for poultry-barn detection post-processing.
//
// Stages: infer (patch scoring + overlap-averaged stitching), detect
// (threshold, polygonize, features, road distances, rule filter), eval
// (IoU matching report), ucb (active-validation campaign), census
// (county-level census comparison), roads-index (road splitting
// inspection), sample (training patch manifests).

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "barnmap/pipeline.hpp"

namespace {

struct CommonFlags {
    std::optional<std::string> config_path;
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;
    std::optional<double> tau;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file; flags override its values");
    cmd->add_option("--workers", flags.workers, "parallel tile workers");
    cmd->add_option("--seed", flags.seed, "random seed");
    cmd->add_option("--tau", flags.tau, "probability threshold");
}

// Config file first, then command line flags on top.
int resolve(barnmap::PipelineConfig& cfg, const CommonFlags& flags) {
    try {
        if (flags.config_path) cfg = barnmap::load_config(*flags.config_path);
    } catch (const std::exception& e) {
        std::cerr << "barnmap: " << e.what() << "\n";
        return 2;
    }
    if (flags.workers) cfg.workers = *flags.workers;
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.tau) cfg.tau = *flags.tau;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"poultry barn detection post-processing toolkit"};
    app.require_subcommand(1);

    barnmap::PipelineConfig cli;
    CommonFlags flags;

    auto* infer = app.add_subcommand("infer", "score tiles patch-wise and stitch probability rasters");
    add_common(infer, flags);
    infer->add_option("--imagery", cli.imagery_dir, "imagery tile directory");
    infer->add_option("--masks", cli.masks_dir, "truth mask directory (oracle scorer)");
    infer->add_option("--out", cli.prob_dir, "output probability raster directory");
    infer->add_option("--patch-size", cli.patch_size, "patch size in pixels");
    infer->add_option("--overlap", cli.overlap, "patch overlap in pixels");
    std::string scorer_kind = "oracle";
    infer->add_option("--scorer", scorer_kind, "oracle|heuristic");
    infer->add_option("--noise", cli.scorer.oracle_noise, "oracle noise epsilon");
    infer->add_option("--flip-rate", cli.scorer.oracle_flip_rate, "oracle per-pixel flip rate");

    auto* detect = app.add_subcommand("detect", "polygonize detections and apply the rule filter");
    add_common(detect, flags);
    detect->add_option("--prob", cli.prob_dir, "probability raster directory");
    detect->add_option("--roads", cli.roads_dir, "per-tile roads GeoJSON directory");
    detect->add_option("--objects", cli.objects_dir, "unfiltered detections output directory");
    detect->add_option("--filtered", cli.filtered_dir, "filtered detections output directory");
    std::string rules_path;
    detect->add_option("--rules", rules_path, "ruleset JSON (defaults to the built-in barn ranges)");
    detect->add_option("--split-d", cli.road_split_m, "road edge split length in meters");

    auto* eval = app.add_subcommand(
        "eval", "match detections against labels at an IoU threshold, or against facilities");
    add_common(eval, flags);
    eval->add_option("--prob", cli.prob_dir, "probability raster directory (tile georeferencing)");
    eval->add_option("--detections", cli.filtered_dir, "detections directory");
    eval->add_option("--labels", cli.labels_path, "labeled barn polygons GeoJSON");
    eval->add_option("--report", cli.report_path, "output report JSON");
    eval->add_option("--iou", cli.iou_thresh, "IoU threshold");
    eval->add_option("--facilities", cli.facilities_path,
                     "facility polygons GeoJSON (switches to proximity validation)");
    eval->add_option("--areas", cli.areas_path, "validated area polygons GeoJSON");
    eval->add_option("--radius", cli.facility_radius_m, "facility match radius in meters");

    auto* ucb = app.add_subcommand("ucb", "run an active-validation campaign over detector scores");
    add_common(ucb, flags);
    ucb->add_option("--scores", cli.scores_path, "image -> detection scores JSON");
    ucb->add_option("--oracle", cli.oracle_path, "image -> label JSON");
    ucb->add_option("--log", cli.report_path, "campaign log (one JSON line per round)");
    ucb->add_option("--buckets", cli.ucb_buckets, "score bucket count");
    ucb->add_option("--round-size", cli.ucb_round_size, "images labeled per round");
    ucb->add_option("--max-rounds", cli.ucb_max_rounds, "round limit");
    ucb->add_option("--exploration", cli.ucb_exploration, "UCB exploration parameter");

    auto* census = app.add_subcommand("census", "compare county barn counts against census operations");
    add_common(census, flags);
    census->add_option("--counties", cli.counties_csv, "county CSV");
    census->add_option("--boundaries", cli.boundaries_path, "county boundary GeoJSON");
    census->add_option("--detections", cli.filtered_dir, "detections directory to aggregate");
    census->add_option("--report", cli.report_path, "output report JSON");

    auto* roads_index = app.add_subcommand("roads-index", "split road edges and dump index nodes");
    add_common(roads_index, flags);
    roads_index->add_option("--roads", cli.roads_dir, "per-tile roads GeoJSON directory");
    roads_index->add_option("--out", cli.nodes_dir, "node dump directory (defaults to roads dir)");
    roads_index->add_option("--split-d", cli.road_split_m, "split length in meters");

    auto* sample = app.add_subcommand("sample", "write a training patch manifest");
    add_common(sample, flags);
    sample->add_option("--masks", cli.masks_dir, "label mask tile directory");
    sample->add_option("--imagery", cli.imagery_dir, "imagery tile directory");
    sample->add_option("--manifest", cli.manifest_path, "output manifest JSONL");
    sample->add_option("--alpha", cli.alpha, "background discard probability");
    sample->add_option("--count", cli.sample_count, "number of samples");
    sample->add_flag("--rotate", cli.rotation_augment, "rotation/flip augmentation");
    sample->add_option("--patch-size", cli.patch_size, "patch size in pixels");

    CLI11_PARSE(app, argc, argv);

    barnmap::PipelineConfig cfg;
    const int rc = resolve(cfg, flags);
    if (rc != 0) return rc;

    // Flags win over the config file: copy every flag the user set.
    auto given = [](CLI::App* cmd, const std::string& name) {
        const CLI::Option* opt = cmd->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    auto merge = [&](CLI::App* cmd) {
        if (given(cmd, "--imagery")) cfg.imagery_dir = cli.imagery_dir;
        if (given(cmd, "--masks")) cfg.masks_dir = cli.masks_dir;
        if (given(cmd, "--out") && cmd == infer) cfg.prob_dir = cli.prob_dir;
        if (given(cmd, "--out") && cmd == roads_index) cfg.nodes_dir = cli.nodes_dir;
        if (given(cmd, "--prob")) cfg.prob_dir = cli.prob_dir;
        if (given(cmd, "--roads")) cfg.roads_dir = cli.roads_dir;
        if (given(cmd, "--objects")) cfg.objects_dir = cli.objects_dir;
        if (given(cmd, "--filtered")) cfg.filtered_dir = cli.filtered_dir;
        if (given(cmd, "--detections")) cfg.filtered_dir = cli.filtered_dir;
        if (given(cmd, "--labels")) cfg.labels_path = cli.labels_path;
        if (given(cmd, "--facilities")) cfg.facilities_path = cli.facilities_path;
        if (given(cmd, "--areas")) cfg.areas_path = cli.areas_path;
        if (given(cmd, "--radius")) cfg.facility_radius_m = cli.facility_radius_m;
        if (given(cmd, "--report")) cfg.report_path = cli.report_path;
        if (given(cmd, "--log")) cfg.report_path = cli.report_path;
        if (given(cmd, "--scores")) cfg.scores_path = cli.scores_path;
        if (given(cmd, "--oracle")) cfg.oracle_path = cli.oracle_path;
        if (given(cmd, "--counties")) cfg.counties_csv = cli.counties_csv;
        if (given(cmd, "--boundaries")) cfg.boundaries_path = cli.boundaries_path;
        if (given(cmd, "--manifest")) cfg.manifest_path = cli.manifest_path;
        if (given(cmd, "--patch-size")) cfg.patch_size = cli.patch_size;
        if (given(cmd, "--overlap")) cfg.overlap = cli.overlap;
        if (given(cmd, "--split-d")) cfg.road_split_m = cli.road_split_m;
        if (given(cmd, "--iou")) cfg.iou_thresh = cli.iou_thresh;
        if (given(cmd, "--alpha")) cfg.alpha = cli.alpha;
        if (given(cmd, "--count")) cfg.sample_count = cli.sample_count;
        if (given(cmd, "--rotate")) cfg.rotation_augment = cli.rotation_augment;
        if (given(cmd, "--noise")) cfg.scorer.oracle_noise = cli.scorer.oracle_noise;
        if (given(cmd, "--flip-rate")) cfg.scorer.oracle_flip_rate = cli.scorer.oracle_flip_rate;
        if (given(cmd, "--buckets")) cfg.ucb_buckets = cli.ucb_buckets;
        if (given(cmd, "--round-size")) cfg.ucb_round_size = cli.ucb_round_size;
        if (given(cmd, "--max-rounds")) cfg.ucb_max_rounds = cli.ucb_max_rounds;
        if (given(cmd, "--exploration")) cfg.ucb_exploration = cli.ucb_exploration;
        if (given(cmd, "--rules")) cfg.rules_path = rules_path;
        if (given(cmd, "--scorer")) {
            if (scorer_kind == "oracle") {
                cfg.scorer.kind = barnmap::ScorerKind::oracle;
            } else if (scorer_kind == "heuristic") {
                cfg.scorer.kind = barnmap::ScorerKind::heuristic;
            } else {
                std::cerr << "barnmap: unknown scorer kind '" << scorer_kind << "'\n";
                std::exit(2);
            }
        }
    };

    if (infer->parsed()) {
        merge(infer);
        return barnmap::cmd_infer(cfg);
    }
    if (detect->parsed()) {
        merge(detect);
        return barnmap::cmd_detect(cfg);
    }
    if (eval->parsed()) {
        merge(eval);
        return barnmap::cmd_eval(cfg);
    }
    if (ucb->parsed()) {
        merge(ucb);
        return barnmap::cmd_ucb(cfg);
    }
    if (census->parsed()) {
        merge(census);
        return barnmap::cmd_census(cfg);
    }
    if (roads_index->parsed()) {
        merge(roads_index);
        return barnmap::cmd_roads_index(cfg);
    }
    if (sample->parsed()) {
        merge(sample);
        return barnmap::cmd_sample(cfg);
    }
    return 2;
}
