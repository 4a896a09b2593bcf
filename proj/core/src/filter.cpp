#include "barnmap/filter.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace barnmap {

void RuleSet::validate() const {
    if (area_min_m2 < 0.0 || aspect_min < 0.0 || road_buffer_m < 0.0) {
        throw std::invalid_argument("ruleset: bounds must be non-negative");
    }
    if (area_min_m2 > area_max_m2 || aspect_min > aspect_max) {
        throw std::invalid_argument("ruleset: range minimum exceeds maximum");
    }
}

RuleSet RuleSet::barn_defaults() {
    RuleSet r;
    r.area_min_m2 = 525.0;
    r.area_max_m2 = 8106.0;
    r.aspect_min = 3.4;
    r.aspect_max = 20.49;
    r.road_buffer_m = 0.0;
    return r;
}

RuleSet read_rules(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ruleset file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed ruleset " + path + ": " + e.what());
    }
    RuleSet r;
    try {
        r.area_min_m2 = j.at("area_m2").at(0).get<double>();
        r.area_max_m2 = j.at("area_m2").at(1).get<double>();
        r.aspect_min = j.at("aspect").at(0).get<double>();
        r.aspect_max = j.at("aspect").at(1).get<double>();
        r.road_buffer_m = j.value("road_buffer_m", 0.0);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed ruleset " + path + ": " + e.what());
    }
    r.validate();
    return r;
}

void write_rules(const RuleSet& rules, const std::string& path) {
    rules.validate();
    nlohmann::json j;
    j["area_m2"] = {rules.area_min_m2, rules.area_max_m2};
    j["aspect"] = {rules.aspect_min, rules.aspect_max};
    j["road_buffer_m"] = rules.road_buffer_m;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write ruleset file: " + path);
    out << j.dump(2) << "\n";
}

RuleSet derive_rules(std::span<const DetectedObject> labeled) {
    if (labeled.empty()) throw std::invalid_argument("derive_rules: empty labeled set");
    RuleSet r;
    r.area_min_m2 = r.area_max_m2 = labeled[0].area_m2;
    r.aspect_min = r.aspect_max = labeled[0].aspect_ratio;
    for (const DetectedObject& obj : labeled) {
        r.area_min_m2 = std::min(r.area_min_m2, obj.area_m2);
        r.area_max_m2 = std::max(r.area_max_m2, obj.area_m2);
        r.aspect_min = std::min(r.aspect_min, obj.aspect_ratio);
        r.aspect_max = std::max(r.aspect_max, obj.aspect_ratio);
    }
    r.road_buffer_m = 0.0;
    return r;
}

const char* reject_reason_name(RejectReason r) {
    switch (r) {
        case RejectReason::none: return "none";
        case RejectReason::area_below_min: return "area-below-min";
        case RejectReason::area_above_max: return "area-above-max";
        case RejectReason::aspect_below_min: return "aspect-below-min";
        case RejectReason::aspect_above_max: return "aspect-above-max";
        case RejectReason::road_intersection: return "road-intersection";
    }
    return "none";
}

RejectReason classify(const DetectedObject& obj, const RuleSet& rules) {
    if (!obj.road_distance_m.has_value()) {
        throw std::invalid_argument("classify: road_distance is unset; run the roads stage first");
    }
    if (obj.area_m2 < rules.area_min_m2) return RejectReason::area_below_min;
    if (obj.area_m2 > rules.area_max_m2) return RejectReason::area_above_max;
    if (obj.aspect_ratio < rules.aspect_min) return RejectReason::aspect_below_min;
    if (obj.aspect_ratio > rules.aspect_max) return RejectReason::aspect_above_max;
    if (!(*obj.road_distance_m > rules.road_buffer_m)) return RejectReason::road_intersection;
    return RejectReason::none;
}

FilterResult filter_objects(std::span<const DetectedObject> objects, const RuleSet& rules) {
    FilterResult result;
    for (const DetectedObject& obj : objects) {
        const RejectReason reason = classify(obj, rules);
        if (reason == RejectReason::none) {
            result.kept.push_back(obj);
        } else {
            result.rejected.emplace_back(obj, reason);
        }
    }
    return result;
}

}  // namespace barnmap
