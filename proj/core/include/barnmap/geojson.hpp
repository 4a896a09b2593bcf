#pragma once

#include <optional>
#include <string>
#include <vector>

#include "barnmap/census.hpp"
#include "barnmap/eval.hpp"
#include "barnmap/filter.hpp"
#include "barnmap/objects.hpp"
#include "barnmap/roads.hpp"

namespace barnmap {

// GeoJSON readers/writers for the toolkit's vector interchange files. All
// coordinates are projected meters in the raster CRS; polygon exterior rings
// are written closed (first position repeated).

// FeatureCollection of detections. Properties: area_m2, aspect_ratio,
// orientation_deg, mean_prob, year, and when available road_dist_m (null
// for no-road +inf) plus kept/reject_reason.
struct DetectionFeature {
    DetectedObject object;
    std::optional<bool> kept;
    std::optional<std::string> reject_reason;
};

void write_detections(const std::vector<DetectionFeature>& features, const std::string& path);
std::vector<DetectionFeature> read_detections(const std::string& path);
std::string detections_json_text(const std::vector<DetectionFeature>& features);

// FeatureCollection of LineString roads.
RoadNetwork read_roads(const std::string& path);
void write_roads(const RoadNetwork& net, const std::string& path);

// Polygon/MultiPolygon features keyed by a "fips" property.
std::vector<CountyBoundary> read_county_boundaries(const std::string& path);

// Facility polygons with a "class" property in {poultry, other, empty}.
std::vector<Facility> read_facilities(const std::string& path);

// Plain polygons (validated-area masks and labeled barn outlines).
std::vector<Ring> read_polygons(const std::string& path);
void write_polygons(const std::vector<Ring>& polygons, const std::string& path);

}  // namespace barnmap
