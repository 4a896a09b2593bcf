#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "barnmap/objects.hpp"

namespace barnmap {

// Rule-based object classifier: keep an object when its rectangle area and
// aspect ratio fall inside the derived ranges (bounds inclusive) and it is
// not on a road (road_distance > road_buffer).
struct RuleSet {
    double area_min_m2 = 0.0;
    double area_max_m2 = 0.0;
    double aspect_min = 1.0;
    double aspect_max = 1.0;
    double road_buffer_m = 0.0;

    void validate() const;

    // Reference ranges for poultry barns: area [525, 8106] m2, aspect
    // ratio [3.4, 20.49], reject road-touching objects.
    static RuleSet barn_defaults();
};

RuleSet read_rules(const std::string& path);
void write_rules(const RuleSet& rules, const std::string& path);

// Feature ranges of a labeled polygon set, with road_buffer = 0.
RuleSet derive_rules(std::span<const DetectedObject> labeled);

enum class RejectReason : std::uint8_t {
    none,
    area_below_min,
    area_above_max,
    aspect_below_min,
    aspect_above_max,
    road_intersection,
};

const char* reject_reason_name(RejectReason r);

// First failed rule in (area, aspect, road) order; none when kept. Throws
// when road_distance is unset.
RejectReason classify(const DetectedObject& obj, const RuleSet& rules);

struct FilterResult {
    std::vector<DetectedObject> kept;
    std::vector<std::pair<DetectedObject, RejectReason>> rejected;
};

// Order-preserving partition of the input.
FilterResult filter_objects(std::span<const DetectedObject> objects, const RuleSet& rules);

}  // namespace barnmap
