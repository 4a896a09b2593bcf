#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "barnmap/geometry.hpp"

namespace barnmap {

// Road network for one tile: polylines in projected meters.
struct RoadNetwork {
    std::vector<Polyline> edges;

    // Drops repeated consecutive vertices and edges shorter than 2 distinct
    // vertices.
    void normalize();
};

struct RoadNode {
    Point position;
    std::int64_t edge_id = 0;
};

// Static 2-d tree over road nodes with exact nearest and radius queries.
class KdTree2d {
public:
    KdTree2d() = default;
    explicit KdTree2d(std::vector<RoadNode> nodes);

    bool empty() const { return nodes_.empty(); }
    std::size_t size() const { return nodes_.size(); }

    // Index of the closest node (ties broken toward the lower index).
    std::size_t nearest(Point query) const;

    // Indices of all nodes with distance <= radius, ascending.
    std::vector<std::size_t> radius_query(Point query, double radius) const;

    const RoadNode& node(std::size_t i) const { return nodes_[i]; }

private:
    struct TreeNode {
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::int32_t begin = 0;  // leaf payload range in order_
        std::int32_t end = 0;
        float min_x = 0, max_x = 0, min_y = 0, max_y = 0;
        double split = 0.0;
        std::uint8_t axis = 0;
        bool leaf = false;
    };

    std::int32_t build(std::int32_t begin, std::int32_t end);
    void collect(std::int32_t node, Point q, double r2, std::vector<std::size_t>& out) const;
    void nearest_walk(std::int32_t node, Point q, double& best2, std::size_t& best) const;
    double box_distance2(const TreeNode& n, Point q) const;

    std::vector<RoadNode> nodes_;
    std::vector<std::int32_t> order_;  // permutation of node indices, partitioned by tree
    std::vector<TreeNode> tree_;
    std::int32_t root_ = -1;
};

// Split road network indexed for nearest-road queries. An original edge of
// polyline length D contributes exactly 2 + floor(D / split_length) nodes,
// evenly spaced by arc length, so consecutive nodes along an edge are at
// most split_length apart.
struct RoadIndex {
    double split_length = 100.0;
    std::vector<RoadNode> nodes;
    KdTree2d tree;
};

// Node placement only (exposed for inspection and tests).
std::vector<RoadNode> split_edges(const RoadNetwork& net, double split_length);

// split_edges + tree build. Throws when the network has no usable edges and
// require_nonempty is set; otherwise an empty index yields +inf distances.
RoadIndex build_road_index(const RoadNetwork& net, double split_length = 100.0,
                           bool require_nonempty = false);

struct RoadDistanceResult {
    double distance_m = std::numeric_limits<double>::infinity();
    std::optional<std::int64_t> edge_id;
};

// Exact minimum distance from a filled polygon to the nearest road polyline
// (0 when a road touches or crosses the polygon). Candidate edges come from
// an expanding radius query at the polygon centroid, then one exact-capture
// re-query sized by the best distance so far, the polygon's own radius, and
// the node spacing; the final minimum is taken with exact polygon-line
// distances over that candidate set.
RoadDistanceResult nearest_road_distance(const Ring& polygon, const RoadIndex& index,
                                         const RoadNetwork& net);

}  // namespace barnmap
