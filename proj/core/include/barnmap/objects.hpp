#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "barnmap/geometry.hpp"
#include "barnmap/raster.hpp"

namespace barnmap {

struct Pixel {
    int row = 0;
    int col = 0;
    bool operator==(const Pixel&) const = default;
};

// Maximal 4-connected set of positive pixels.
struct ConnectedComponent {
    std::vector<Pixel> pixels;  // sorted row-major
    int min_row = 0, min_col = 0, max_row = 0, max_col = 0;
};

// Polygonized detection with object-level features. road_distance stays
// unset until the roads module fills it.
struct DetectedObject {
    Ring polygon;  // exterior ring, geographic meters, counter-clockwise
    double area_m2 = 0.0;
    double aspect_ratio = 1.0;
    double orientation_deg = 0.0;  // long-side angle from east, in [0, 180)
    std::optional<double> road_distance_m;
    std::optional<std::int64_t> nearest_edge_id;
    double mean_probability = 0.0;
    std::optional<int> timestamp;
    std::vector<Pixel> pixels;  // component pixels, for raster-space IoU
};

// Binary mask with pixel = 1 iff prob >= tau. tau must be in [0, 1].
RasterTile threshold(const RasterTile& prob, double tau);

// 4-connected components of a binary mask, ordered by first pixel in
// row-major scan order. Empty mask gives an empty list.
std::vector<ConnectedComponent> connected_components(const RasterTile& mask);

// Outer boundary of the component as integer pixel-corner coordinates
// (x = col, y = row, y grows downward), counter-clockwise in that frame
// after the caller's geotransform flips y. Collinear corners are merged.
std::vector<PointI64> trace_boundary_pixels(const ConnectedComponent& comp);

// Outer boundary in geographic meters, counter-clockwise.
Ring trace_polygon(const ConnectedComponent& comp, const Geotransform& geo);

// Minimum rotated rectangle features plus the mean probability over the
// component's pixels. The hull is taken over exact integer pixel corners
// before geotransform scaling.
DetectedObject object_features(const ConnectedComponent& comp, const RasterTile& prob);

// threshold + connected_components + object_features over one tile.
std::vector<DetectedObject> extract_objects(const RasterTile& prob, double tau);

}  // namespace barnmap
