#include "barnmap/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "barnmap/census.hpp"
#include "barnmap/eval.hpp"
#include "barnmap/geojson.hpp"
#include "barnmap/objects.hpp"
#include "barnmap/raster.hpp"
#include "barnmap/rng.hpp"
#include "barnmap/roads.hpp"
#include "barnmap/ucb.hpp"

namespace barnmap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;

std::mutex g_log_mutex;

void log_error(const std::string& msg) {
    std::scoped_lock lock(g_log_mutex);
    std::cerr << "barnmap: " << msg << "\n";
}

// Claim-by-index worker pool over independent tiles. Output content depends
// only on the tile and the seed, so scheduling order cannot change results.
int run_parallel(std::size_t item_count, int workers,
                 const std::function<void(std::size_t)>& work) {
    std::atomic<std::size_t> next{0};
    std::atomic<int> failures{0};
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= item_count) return;
            try {
                work(i);
            } catch (const std::exception& e) {
                failures.fetch_add(1);
                log_error(e.what());
            }
        }
    };
    const int n = std::max(1, workers);
    if (n == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) pool.emplace_back(body);
        for (std::thread& t : pool) t.join();
    }
    return failures.load() == 0 ? kExitOk : kExitPartial;
}

void write_raster_atomic(const RasterTile& tile, const std::string& payload_path) {
    const std::string tmp_payload = payload_path + ".tmp";
    write_raster(tile, tmp_payload);
    // Sidecar first: the payload is the completion marker for crash-resume,
    // so it must appear last.
    fs::rename(sidecar_path(tmp_payload), sidecar_path(payload_path));
    fs::rename(tmp_payload, payload_path);
}

void write_text_atomic(const std::string& text, const std::string& path) {
    const std::string tmp = path + ".tmp";
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << text;
    out.close();
    if (!out) throw std::runtime_error("short write on " + tmp);
    fs::rename(tmp, path);
}

std::string json_to_text(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::vector<std::string> list_tile_stems(const std::string& dir) {
    std::vector<std::string> stems;
    if (!fs::is_directory(dir)) {
        throw std::runtime_error("not a directory: " + dir);
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const fs::path p = entry.path();
        if (p.extension() == ".bin") stems.push_back(p.stem().string());
    }
    std::sort(stems.begin(), stems.end());
    return stems;
}

void apply_config_json(PipelineConfig& cfg, const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "tau") cfg.tau = value.get<double>();
            else if (key == "patch_size") cfg.patch_size = value.get<int>();
            else if (key == "overlap") cfg.overlap = value.get<int>();
            else if (key == "alpha") cfg.alpha = value.get<double>();
            else if (key == "road_split_m") cfg.road_split_m = value.get<double>();
            else if (key == "iou_thresh") cfg.iou_thresh = value.get<double>();
            else if (key == "facility_radius_m") cfg.facility_radius_m = value.get<double>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "workers") cfg.workers = value.get<int>();
            else if (key == "sample_count") cfg.sample_count = value.get<int>();
            else if (key == "rotation_augment") cfg.rotation_augment = value.get<bool>();
            else if (key == "rules") cfg.rules_path = value.get<std::string>();
            else if (key == "imagery_dir") cfg.imagery_dir = value.get<std::string>();
            else if (key == "masks_dir") cfg.masks_dir = value.get<std::string>();
            else if (key == "prob_dir") cfg.prob_dir = value.get<std::string>();
            else if (key == "objects_dir") cfg.objects_dir = value.get<std::string>();
            else if (key == "filtered_dir") cfg.filtered_dir = value.get<std::string>();
            else if (key == "roads_dir") cfg.roads_dir = value.get<std::string>();
            else if (key == "labels") cfg.labels_path = value.get<std::string>();
            else if (key == "facilities") cfg.facilities_path = value.get<std::string>();
            else if (key == "areas") cfg.areas_path = value.get<std::string>();
            else if (key == "report") cfg.report_path = value.get<std::string>();
            else if (key == "scores") cfg.scores_path = value.get<std::string>();
            else if (key == "oracle") cfg.oracle_path = value.get<std::string>();
            else if (key == "counties_csv") cfg.counties_csv = value.get<std::string>();
            else if (key == "boundaries") cfg.boundaries_path = value.get<std::string>();
            else if (key == "manifest") cfg.manifest_path = value.get<std::string>();
            else if (key == "nodes_dir") cfg.nodes_dir = value.get<std::string>();
            else if (key == "ucb_buckets") cfg.ucb_buckets = value.get<int>();
            else if (key == "ucb_round_size") cfg.ucb_round_size = value.get<int>();
            else if (key == "ucb_max_rounds") cfg.ucb_max_rounds = value.get<int>();
            else if (key == "ucb_exploration") cfg.ucb_exploration = value.get<double>();
            else if (key == "scorer") {
                const std::string kind = value.value("kind", "oracle");
                if (kind == "oracle") cfg.scorer.kind = ScorerKind::oracle;
                else if (kind == "heuristic") cfg.scorer.kind = ScorerKind::heuristic;
                else throw std::invalid_argument("unknown scorer kind '" + kind + "'");
                cfg.scorer.oracle_noise = value.value("noise", 0.0);
                cfg.scorer.oracle_flip_rate = value.value("flip_rate", 0.0);
            } else {
                throw std::invalid_argument("unknown config key '" + key + "'");
            }
        } catch (const json::exception& e) {
            throw std::invalid_argument("config key '" + key + "': " + e.what());
        }
    }
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    PipelineConfig cfg;
    apply_config_json(cfg, text);
    return cfg;
}

int cmd_infer(const PipelineConfig& cfg) {
    try {
        cfg.scorer.validate();
        if (cfg.prob_dir.empty()) throw std::invalid_argument("infer: prob_dir is required");
        const std::string source_dir =
            cfg.scorer.kind == ScorerKind::heuristic ? cfg.imagery_dir
                                                     : (cfg.imagery_dir.empty() ? cfg.masks_dir : cfg.imagery_dir);
        if (source_dir.empty()) {
            throw std::invalid_argument("infer: imagery_dir (or masks_dir for the oracle scorer) is required");
        }
        if (cfg.scorer.kind == ScorerKind::oracle && cfg.masks_dir.empty()) {
            throw std::invalid_argument("infer: the oracle scorer requires masks_dir");
        }
        fs::create_directories(cfg.prob_dir);

        const std::vector<std::string> stems = list_tile_stems(source_dir);
        return run_parallel(stems.size(), cfg.workers, [&](std::size_t i) {
            const std::string& stem = stems[i];
            const std::string out_path = cfg.prob_dir + "/" + stem + ".bin";
            if (fs::exists(out_path)) return;  // crash-resume: already done

            const RasterTile source = read_raster(source_dir + "/" + stem + ".bin");
            RasterTile mask;
            const RasterTile* mask_ptr = nullptr;
            if (cfg.scorer.kind == ScorerKind::oracle) {
                mask = read_raster(cfg.masks_dir + "/" + stem + ".bin");
                mask_ptr = &mask;
            }

            const PatchGrid grid = make_patch_grid(source.width(), source.height(),
                                                   cfg.patch_size, cfg.overlap);
            Stitcher stitcher(source.width(), source.height());
            for (const PatchOrigin& origin : grid.origins) {
                const RasterTile patch = extract_patch(source, origin, cfg.patch_size);
                RasterTile mask_patch;
                const RasterTile* mask_patch_ptr = nullptr;
                if (mask_ptr != nullptr) {
                    mask_patch = extract_patch(*mask_ptr, origin, cfg.patch_size);
                    mask_patch_ptr = &mask_patch;
                }
                ScorerConfig per_patch = cfg.scorer;
                per_patch.seed = patch_seed(cfg.seed, stem, origin.row, origin.col);
                const RasterTile prob = score_patch(patch, mask_patch_ptr, per_patch);
                stitcher.add(origin, prob.f32_data(), cfg.patch_size);
            }
            RasterTile out = stitcher.finalize(source.geo);
            out.timestamp = source.timestamp;
            write_raster_atomic(out, out_path);
        });
    } catch (const std::exception& e) {
        log_error(e.what());
        return kExitConfig;
    }
}

int cmd_detect(const PipelineConfig& cfg) {
    try {
        if (cfg.prob_dir.empty() || cfg.objects_dir.empty() || cfg.filtered_dir.empty()) {
            throw std::invalid_argument("detect: prob_dir, objects_dir and filtered_dir are required");
        }
        const RuleSet rules = cfg.rules_path ? read_rules(*cfg.rules_path) : RuleSet::barn_defaults();
        fs::create_directories(cfg.objects_dir);
        fs::create_directories(cfg.filtered_dir);

        const std::vector<std::string> stems = list_tile_stems(cfg.prob_dir);
        return run_parallel(stems.size(), cfg.workers, [&](std::size_t i) {
            const std::string& stem = stems[i];
            const std::string objects_path = cfg.objects_dir + "/" + stem + ".geojson";
            const std::string filtered_path = cfg.filtered_dir + "/" + stem + ".geojson";
            if (fs::exists(objects_path) && fs::exists(filtered_path)) return;

            const RasterTile prob = read_raster(cfg.prob_dir + "/" + stem + ".bin");
            std::vector<DetectedObject> objects = extract_objects(prob, cfg.tau);

            const std::string roads_path =
                cfg.roads_dir.empty() ? "" : cfg.roads_dir + "/" + stem + ".roads.geojson";
            if (!roads_path.empty() && fs::exists(roads_path)) {
                const RoadNetwork net = read_roads(roads_path);
                const RoadIndex index = build_road_index(net, cfg.road_split_m);
                for (DetectedObject& obj : objects) {
                    const RoadDistanceResult r = nearest_road_distance(obj.polygon, index, net);
                    obj.road_distance_m = r.distance_m;
                    obj.nearest_edge_id = r.edge_id;
                }
            } else {
                log_error("no roads file for tile " + stem + "; road rule passes by default");
                for (DetectedObject& obj : objects) {
                    obj.road_distance_m = std::numeric_limits<double>::infinity();
                }
            }

            std::vector<DetectionFeature> unfiltered;
            std::vector<DetectionFeature> filtered;
            for (const DetectedObject& obj : objects) {
                const RejectReason reason = classify(obj, rules);
                DetectionFeature f;
                f.object = obj;
                f.kept = reason == RejectReason::none;
                if (reason != RejectReason::none) f.reject_reason = reject_reason_name(reason);
                unfiltered.push_back(f);
                if (reason == RejectReason::none) {
                    DetectionFeature kept;
                    kept.object = obj;
                    filtered.push_back(kept);
                }
            }
            write_text_atomic(detections_json_text(unfiltered), objects_path);
            write_text_atomic(detections_json_text(filtered), filtered_path);
        });
    } catch (const std::exception& e) {
        log_error(e.what());
        return kExitConfig;
    }
}

namespace {

// Facility-proximity validation over every detection in the directory.
int eval_against_facilities(const PipelineConfig& cfg, const std::string& detections_dir) {
    std::vector<Ring> predictions;
    for (const auto& entry : fs::directory_iterator(detections_dir)) {
        if (entry.path().extension() != ".geojson") continue;
        for (const DetectionFeature& f : read_detections(entry.path().string())) {
            predictions.push_back(f.object.polygon);
        }
    }
    const std::vector<Facility> facilities = read_facilities(cfg.facilities_path);
    std::vector<Ring> areas;
    if (!cfg.areas_path.empty()) areas = read_polygons(cfg.areas_path);

    const FacilityValidationReport r =
        facility_validation(predictions, facilities, areas, cfg.facility_radius_m);
    json report;
    report["tp"] = r.true_positives;
    report["fp_in_area"] = r.false_positives_in_area;
    report["predictions"] = r.predictions_total;
    report["predictions_in_area"] = r.predictions_in_area;
    report["facilities_matched"] = r.facilities_matched;
    report["facilities_missed"] = r.facilities_missed;
    report["precision_in_area"] = r.precision_in_area;
    report["precision_lower_bound"] = r.precision_lower_bound;
    report["recall"] = r.recall;
    write_text_atomic(json_to_text(report), cfg.report_path);
    return kExitOk;
}

}  // namespace

int cmd_eval(const PipelineConfig& cfg) {
    try {
        const std::string detections_dir =
            cfg.filtered_dir.empty() ? cfg.objects_dir : cfg.filtered_dir;
        if (detections_dir.empty()) {
            throw std::invalid_argument("eval: filtered_dir (or objects_dir) is required");
        }
        if (!cfg.facilities_path.empty()) {
            if (cfg.report_path.empty()) throw std::invalid_argument("eval: report is required");
            return eval_against_facilities(cfg, detections_dir);
        }
        if (cfg.prob_dir.empty() || cfg.labels_path.empty() || cfg.report_path.empty()) {
            throw std::invalid_argument("eval: prob_dir, labels and report are required");
        }

        const std::vector<Ring> labels = read_polygons(cfg.labels_path);
        const std::vector<std::string> stems = list_tile_stems(cfg.prob_dir);

        std::int64_t tp = 0, fp = 0;
        std::vector<bool> label_matched(labels.size(), false);
        json pairs = json::array();
        std::size_t pred_offset = 0;

        for (const std::string& stem : stems) {
            const RasterHeader header = read_raster_header(cfg.prob_dir + "/" + stem + ".bin");
            const std::string det_path = detections_dir + "/" + stem + ".geojson";
            std::vector<DetectionFeature> detections;
            if (fs::exists(det_path)) detections = read_detections(det_path);

            std::vector<std::vector<Pixel>> pred_pixels;
            pred_pixels.reserve(detections.size());
            for (const DetectionFeature& f : detections) {
                pred_pixels.push_back(
                    rasterize_ring(f.object.polygon, header.geo, header.width, header.height));
            }
            std::vector<std::vector<Pixel>> label_pixels;
            std::vector<std::size_t> label_ids;
            for (std::size_t j = 0; j < labels.size(); ++j) {
                std::vector<Pixel> px = rasterize_ring(labels[j], header.geo, header.width, header.height);
                if (!px.empty()) {
                    label_pixels.push_back(std::move(px));
                    label_ids.push_back(j);
                }
            }

            const MatchReport report = match_objects(pred_pixels, label_pixels, cfg.iou_thresh);
            tp += report.true_positives;
            fp += report.false_positives;
            for (const MatchPair& pair : report.pairs) {
                label_matched[label_ids[pair.label]] = true;
                pairs.push_back({pred_offset + pair.pred, label_ids[pair.label], pair.iou});
            }
            pred_offset += pred_pixels.size();
        }

        std::int64_t fn = 0;
        for (bool m : label_matched) {
            if (!m) ++fn;
        }
        const double precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        const double recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;

        json report;
        report["tp"] = tp;
        report["fp"] = fp;
        report["fn"] = fn;
        report["precision"] = precision;
        report["recall"] = recall;
        report["f2"] = f_beta(precision, recall, 2.0);
        report["pairs"] = pairs;
        write_text_atomic(json_to_text(report), cfg.report_path);
        return kExitOk;
    } catch (const std::exception& e) {
        log_error(e.what());
        return kExitConfig;
    }
}

int cmd_ucb(const PipelineConfig& cfg) {
    try {
        if (cfg.scores_path.empty() || cfg.report_path.empty()) {
            throw std::invalid_argument("ucb: scores and report are required");
        }
        std::ifstream in(cfg.scores_path);
        if (!in) throw std::invalid_argument("ucb: cannot open scores file " + cfg.scores_path);
        json scores_json;
        in >> scores_json;
        std::map<std::string, std::vector<double>> image_scores;
        for (const auto& [image, scores] : scores_json.items()) {
            image_scores[image] = scores.get<std::vector<double>>();
        }

        std::function<bool(const std::string&)> oracle;
        std::map<std::string, bool> labels;
        if (!cfg.oracle_path.empty()) {
            std::ifstream oin(cfg.oracle_path);
            if (!oin) throw std::invalid_argument("ucb: cannot open oracle file " + cfg.oracle_path);
            json oracle_json;
            oin >> oracle_json;
            for (const auto& [image, label] : oracle_json.items()) labels[image] = label.get<bool>();
            oracle = [&labels](const std::string& image) {
                const auto it = labels.find(image);
                if (it == labels.end()) throw std::runtime_error("ucb oracle has no label for " + image);
                return it->second;
            };
        } else {
            throw std::invalid_argument("ucb: an oracle label file is required");
        }

        std::vector<double> all_scores;
        for (const auto& [image, scores] : image_scores) {
            all_scores.insert(all_scores.end(), scores.begin(), scores.end());
        }
        const BucketEdges edges = quantile_edges(all_scores, cfg.ucb_buckets);

        UcbConfig ucb_cfg;
        ucb_cfg.exploration = cfg.ucb_exploration;
        ucb_cfg.seed = cfg.seed;
        UcbCampaign campaign(image_scores, edges, ucb_cfg);

        std::string log_text;
        for (int round = 0; round < cfg.ucb_max_rounds && !campaign.exhausted(); ++round) {
            const RoundLog entry = campaign.run_round(cfg.ucb_round_size, oracle);
            json j;
            j["round"] = entry.round;
            j["pi"] = entry.pi;
            j["sampled"] = entry.sampled;
            j["labels"] = entry.labels;
            j["found"] = entry.found;
            j["n"] = entry.visits;
            j["mu"] = entry.mu;
            j["N_c_mu"] = entry.estimate_mu;
            j["N_c_pi"] = entry.estimate_pi;
            j["stopped"] = entry.stopped;
            log_text += j.dump() + "\n";
            if (entry.stopped) break;
        }
        write_text_atomic(log_text, cfg.report_path);
        return kExitOk;
    } catch (const std::exception& e) {
        log_error(e.what());
        return kExitConfig;
    }
}

int cmd_census(const PipelineConfig& cfg) {
    try {
        if (cfg.counties_csv.empty() || cfg.report_path.empty()) {
            throw std::invalid_argument("census: counties_csv and report are required");
        }
        std::vector<CountyRecord> records = read_county_csv(cfg.counties_csv);

        json report;
        // Optional aggregation of detections into per-county counts.
        if (!cfg.boundaries_path.empty() && !cfg.filtered_dir.empty()) {
            const std::vector<CountyBoundary> boundaries = read_county_boundaries(cfg.boundaries_path);
            std::vector<DetectedObject> objects;
            for (const auto& entry : fs::directory_iterator(cfg.filtered_dir)) {
                if (entry.path().extension() != ".geojson") continue;
                for (const DetectionFeature& f : read_detections(entry.path().string())) {
                    objects.push_back(f.object);
                }
            }
            const CountyCounts counts = aggregate_by_county(objects, boundaries);
            for (CountyRecord& rec : records) {
                const auto it = counts.per_county.find(rec.fips);
                if (it != counts.per_county.end()) rec.predicted_barns = it->second;
            }
            report["unassigned"] = counts.unassigned;
            report["overlap_warnings"] = counts.overlap_warnings;
        }

        std::set<int> thresholds;
        for (const CountyRecord& rec : records) {
            for (const auto& [t, count] : rec.census_operations) thresholds.insert(t);
        }
        json rho_by_threshold = json::object();
        std::vector<int> threshold_list(thresholds.begin(), thresholds.end());
        for (const auto& [t, rho] : threshold_sweep(records, threshold_list)) {
            rho_by_threshold["ops_" + std::to_string(t)] = rho;
        }
        report["spearman"] = rho_by_threshold;

        // CV sweep over the observed cv values, largest threshold series.
        if (!threshold_list.empty()) {
            std::vector<double> cutoffs;
            for (const CountyRecord& rec : records) {
                if (rec.cv) cutoffs.push_back(*rec.cv);
            }
            std::sort(cutoffs.begin(), cutoffs.end());
            cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
            json sweep = json::array();
            for (const CvSweepEntry& entry :
                 cv_subset_sweep(records, cutoffs, threshold_list.back())) {
                json e;
                e["cv_cutoff"] = entry.cutoff;
                e["counties"] = entry.county_count;
                e["rho"] = entry.rho ? json(*entry.rho) : json(nullptr);
                sweep.push_back(e);
            }
            report["cv_sweep"] = sweep;
        }
        write_text_atomic(json_to_text(report), cfg.report_path);
        return kExitOk;
    } catch (const std::exception& e) {
        log_error(e.what());
        return kExitConfig;
    }
}

int cmd_roads_index(const PipelineConfig& cfg) {
    try {
        if (cfg.roads_dir.empty()) throw std::invalid_argument("roads-index: roads_dir is required");
        const std::string out_dir = cfg.nodes_dir.empty() ? cfg.roads_dir : cfg.nodes_dir;
        fs::create_directories(out_dir);

        std::vector<std::string> road_files;
        for (const auto& entry : fs::directory_iterator(cfg.roads_dir)) {
            const std::string name = entry.path().filename().string();
            if (name.size() > 14 && name.ends_with(".roads.geojson")) road_files.push_back(name);
        }
        std::sort(road_files.begin(), road_files.end());

        return run_parallel(road_files.size(), cfg.workers, [&](std::size_t i) {
            const std::string& name = road_files[i];
            const std::string tile_id = name.substr(0, name.size() - 14);
            const RoadNetwork net = read_roads(cfg.roads_dir + "/" + name);
            const std::vector<RoadNode> nodes = split_edges(net, cfg.road_split_m);

            json j;
            j["tile"] = tile_id;
            j["d"] = cfg.road_split_m;
            j["edge_count"] = net.edges.size();
            j["node_count"] = nodes.size();
            json node_list = json::array();
            for (const RoadNode& n : nodes) node_list.push_back({n.position.x, n.position.y, n.edge_id});
            j["nodes"] = node_list;
            write_text_atomic(json_to_text(j), out_dir + "/" + tile_id + ".nodes.json");
        });
    } catch (const std::exception& e) {
        log_error(e.what());
        return kExitConfig;
    }
}

int cmd_sample(const PipelineConfig& cfg) {
    try {
        if (cfg.masks_dir.empty() || cfg.manifest_path.empty()) {
            throw std::invalid_argument("sample: masks_dir and manifest are required");
        }
        const std::vector<std::string> stems = list_tile_stems(cfg.masks_dir);
        if (stems.empty()) throw std::invalid_argument("sample: no mask tiles in " + cfg.masks_dir);

        std::vector<RasterTile> masks;
        std::vector<RasterTile> imagery;
        std::vector<SamplerTile> tiles;
        masks.reserve(stems.size());
        imagery.reserve(stems.size());
        for (const std::string& stem : stems) {
            masks.push_back(read_raster(cfg.masks_dir + "/" + stem + ".bin"));
            SamplerTile t;
            t.tile_id = stem;
            t.mask = &masks.back();
            if (!cfg.imagery_dir.empty()) {
                imagery.push_back(read_raster(cfg.imagery_dir + "/" + stem + ".bin"));
                t.imagery = &imagery.back();
            }
            t.imagery_year = masks.back().timestamp.value_or(0);
            tiles.push_back(t);
        }

        SamplerConfig sampler_cfg;
        sampler_cfg.alpha = cfg.alpha;
        sampler_cfg.patch_size = cfg.patch_size;
        sampler_cfg.n_samples = cfg.sample_count;
        sampler_cfg.rotation_augment = cfg.rotation_augment;
        sampler_cfg.seed = cfg.seed;

        const SampleResult result = sample_patches(tiles, sampler_cfg);
        std::string text;
        for (const PatchSample& s : result.samples) {
            json j;
            j["tile"] = s.tile_id;
            j["row"] = s.row;
            j["col"] = s.col;
            j["year"] = s.imagery_year;
            j["rot"] = s.rotation_deg;
            j["hflip"] = s.hflip;
            j["vflip"] = s.vflip;
            j["positive"] = s.has_positive;
            text += j.dump() + "\n";
        }
        write_text_atomic(text, cfg.manifest_path);
        return kExitOk;
    } catch (const std::exception& e) {
        log_error(e.what());
        return kExitConfig;
    }
}

}  // namespace barnmap
