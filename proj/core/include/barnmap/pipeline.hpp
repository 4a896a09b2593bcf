#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "barnmap/filter.hpp"
#include "barnmap/sampler.hpp"
#include "barnmap/scorer.hpp"

namespace barnmap {

// Batch orchestration over directories of tiles. Each stage reads one
// directory and writes another, per-tile outputs are written atomically
// (temp file + rename), and finished tiles are skipped on re-runs. Outputs
// are byte-identical for a fixed seed regardless of worker count.

struct PipelineConfig {
    // Stage parameters. Reference defaults: 256 px patches with 64 px
    // overlap, tau 0.5, 0.5 IoU, 100 m facility radius, 100 m road split
    // length.
    double tau = 0.5;
    int patch_size = 256;
    int overlap = 64;
    double alpha = 0.5;
    double road_split_m = 100.0;
    double iou_thresh = 0.5;
    double facility_radius_m = 100.0;
    std::uint64_t seed = 0;
    int workers = 1;
    int sample_count = 0;
    bool rotation_augment = false;

    ScorerConfig scorer;
    std::optional<std::string> rules_path;  // absent -> built-in barn defaults

    // Directories and files, stage-dependent.
    std::string imagery_dir;
    std::string masks_dir;
    std::string prob_dir;
    std::string objects_dir;
    std::string filtered_dir;
    std::string roads_dir;
    std::string labels_path;
    std::string facilities_path;
    std::string areas_path;
    std::string report_path;
    std::string scores_path;
    std::string oracle_path;
    std::string counties_csv;
    std::string boundaries_path;
    std::string manifest_path;
    std::string nodes_dir;

    // ucb stage
    int ucb_buckets = 10;
    int ucb_round_size = 25;
    int ucb_max_rounds = 1000;
    double ucb_exploration = 1.0;
};

PipelineConfig load_config(const std::string& path);
void apply_config_json(PipelineConfig& cfg, const std::string& json_text);

// Exit codes: 0 success, 1 partial failure (some tiles skipped on error),
// 2 invalid configuration or unusable inputs.
int cmd_infer(const PipelineConfig& cfg);
int cmd_detect(const PipelineConfig& cfg);
int cmd_eval(const PipelineConfig& cfg);
int cmd_ucb(const PipelineConfig& cfg);
int cmd_census(const PipelineConfig& cfg);
int cmd_roads_index(const PipelineConfig& cfg);
int cmd_sample(const PipelineConfig& cfg);

// Payload tiles (<stem>.bin) in a directory, sorted by stem.
std::vector<std::string> list_tile_stems(const std::string& dir);

}  // namespace barnmap
