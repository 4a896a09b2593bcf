#include "barnmap/geojson.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace barnmap {

namespace {

using nlohmann::json;

json ring_coordinates(const Ring& ring) {
    json coords = json::array();
    for (const Point& p : ring) coords.push_back({p.x, p.y});
    if (!ring.empty()) coords.push_back({ring.front().x, ring.front().y});  // close the ring
    return coords;
}

Ring parse_ring(const json& coords) {
    Ring ring;
    for (const auto& pos : coords) {
        ring.push_back({pos.at(0).get<double>(), pos.at(1).get<double>()});
    }
    if (ring.size() >= 2 && ring.front().x == ring.back().x && ring.front().y == ring.back().y) {
        ring.pop_back();  // stored unclosed
    }
    return ring;
}

json load_feature_collection(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open GeoJSON file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed GeoJSON " + path + ": " + e.what());
    }
    if (j.value("type", "") != "FeatureCollection" || !j.contains("features")) {
        throw std::runtime_error("expected a FeatureCollection in " + path);
    }
    return j;
}

void dump_feature_collection(const json& features, const std::string& path) {
    json j;
    j["type"] = "FeatureCollection";
    j["features"] = features;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write GeoJSON file: " + path);
    out << j.dump(2) << "\n";
}

// First exterior ring(s) of a Polygon or MultiPolygon geometry.
std::vector<Ring> parse_polygon_geometry(const json& geometry, const std::string& path) {
    const std::string type = geometry.value("type", "");
    std::vector<Ring> rings;
    if (type == "Polygon") {
        rings.push_back(parse_ring(geometry.at("coordinates").at(0)));
    } else if (type == "MultiPolygon") {
        for (const auto& poly : geometry.at("coordinates")) {
            rings.push_back(parse_ring(poly.at(0)));
        }
    } else {
        throw std::runtime_error("expected Polygon/MultiPolygon geometry in " + path);
    }
    return rings;
}

}  // namespace

std::string detections_json_text(const std::vector<DetectionFeature>& features) {
    json out = json::array();
    for (const DetectionFeature& f : features) {
        json feature;
        feature["type"] = "Feature";
        feature["geometry"] = {{"type", "Polygon"},
                               {"coordinates", json::array({ring_coordinates(f.object.polygon)})}};
        json props;
        props["area_m2"] = f.object.area_m2;
        props["aspect_ratio"] = f.object.aspect_ratio;
        props["orientation_deg"] = f.object.orientation_deg;
        props["mean_prob"] = f.object.mean_probability;
        props["year"] = f.object.timestamp ? json(*f.object.timestamp) : json(nullptr);
        if (f.object.road_distance_m) {
            props["road_dist_m"] =
                std::isfinite(*f.object.road_distance_m) ? json(*f.object.road_distance_m) : json(nullptr);
        }
        if (f.kept) props["kept"] = *f.kept;
        if (f.reject_reason) props["reject_reason"] = *f.reject_reason;
        feature["properties"] = std::move(props);
        out.push_back(std::move(feature));
    }
    json collection;
    collection["type"] = "FeatureCollection";
    collection["features"] = std::move(out);
    return collection.dump(2) + "\n";
}

void write_detections(const std::vector<DetectionFeature>& features, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write GeoJSON file: " + path);
    out << detections_json_text(features);
}

std::vector<DetectionFeature> read_detections(const std::string& path) {
    const json j = load_feature_collection(path);
    std::vector<DetectionFeature> out;
    for (const auto& feature : j.at("features")) {
        DetectionFeature f;
        const auto rings = parse_polygon_geometry(feature.at("geometry"), path);
        if (rings.empty()) throw std::runtime_error("detection without polygon in " + path);
        f.object.polygon = rings.front();
        const json& props = feature.at("properties");
        f.object.area_m2 = props.value("area_m2", 0.0);
        f.object.aspect_ratio = props.value("aspect_ratio", 1.0);
        f.object.orientation_deg = props.value("orientation_deg", 0.0);
        f.object.mean_probability = props.value("mean_prob", 0.0);
        if (props.contains("year") && !props["year"].is_null()) {
            f.object.timestamp = props["year"].get<int>();
        }
        if (props.contains("road_dist_m")) {
            f.object.road_distance_m = props["road_dist_m"].is_null()
                                           ? std::numeric_limits<double>::infinity()
                                           : props["road_dist_m"].get<double>();
        }
        if (props.contains("kept")) f.kept = props["kept"].get<bool>();
        if (props.contains("reject_reason") && !props["reject_reason"].is_null()) {
            f.reject_reason = props["reject_reason"].get<std::string>();
        }
        out.push_back(std::move(f));
    }
    return out;
}

RoadNetwork read_roads(const std::string& path) {
    const json j = load_feature_collection(path);
    RoadNetwork net;
    for (const auto& feature : j.at("features")) {
        const json& geometry = feature.at("geometry");
        const std::string type = geometry.value("type", "");
        if (type == "LineString") {
            net.edges.push_back(parse_ring(geometry.at("coordinates")));
        } else if (type == "MultiLineString") {
            for (const auto& line : geometry.at("coordinates")) {
                net.edges.push_back(parse_ring(line));
            }
        } else {
            throw std::runtime_error("expected LineString geometry in roads file " + path);
        }
    }
    net.normalize();
    return net;
}

void write_roads(const RoadNetwork& net, const std::string& path) {
    json features = json::array();
    for (const Polyline& line : net.edges) {
        json coords = json::array();
        for (const Point& p : line) coords.push_back({p.x, p.y});
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
                            {"properties", json::object()}});
    }
    dump_feature_collection(features, path);
}

std::vector<CountyBoundary> read_county_boundaries(const std::string& path) {
    const json j = load_feature_collection(path);
    std::vector<CountyBoundary> out;
    for (const auto& feature : j.at("features")) {
        CountyBoundary county;
        county.fips = feature.at("properties").at("fips").get<std::string>();
        county.rings = parse_polygon_geometry(feature.at("geometry"), path);
        out.push_back(std::move(county));
    }
    return out;
}

std::vector<Facility> read_facilities(const std::string& path) {
    const json j = load_feature_collection(path);
    std::vector<Facility> out;
    for (const auto& feature : j.at("features")) {
        Facility f;
        const auto rings = parse_polygon_geometry(feature.at("geometry"), path);
        if (rings.empty()) continue;
        f.polygon = rings.front();
        const std::string cls = feature.at("properties").value("class", "empty");
        if (cls == "poultry") {
            f.cls = FacilityClass::poultry;
        } else if (cls == "other") {
            f.cls = FacilityClass::other;
        } else if (cls == "empty") {
            f.cls = FacilityClass::empty;
        } else {
            throw std::runtime_error("unknown facility class '" + cls + "' in " + path);
        }
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<Ring> read_polygons(const std::string& path) {
    const json j = load_feature_collection(path);
    std::vector<Ring> out;
    for (const auto& feature : j.at("features")) {
        for (Ring& ring : parse_polygon_geometry(feature.at("geometry"), path)) {
            out.push_back(std::move(ring));
        }
    }
    return out;
}

void write_polygons(const std::vector<Ring>& polygons, const std::string& path) {
    json features = json::array();
    for (const Ring& ring : polygons) {
        features.push_back({{"type", "Feature"},
                            {"geometry",
                             {{"type", "Polygon"}, {"coordinates", json::array({ring_coordinates(ring)})}}},
                            {"properties", json::object()}});
    }
    dump_feature_collection(features, path);
}

}  // namespace barnmap
