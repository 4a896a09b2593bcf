#include "barnmap/roads.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace barnmap {

void RoadNetwork::normalize() {
    std::vector<Polyline> kept;
    kept.reserve(edges.size());
    for (Polyline& line : edges) {
        Polyline clean;
        for (const Point& p : line) {
            if (clean.empty() || distance(clean.back(), p) > 0.0) clean.push_back(p);
        }
        if (clean.size() >= 2) kept.push_back(std::move(clean));
    }
    edges = std::move(kept);
}

std::vector<RoadNode> split_edges(const RoadNetwork& net, double split_length) {
    if (!(split_length > 0.0)) throw std::invalid_argument("split_edges: split length must be positive");

    std::vector<RoadNode> nodes;
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const Polyline& line = net.edges[e];
        if (line.size() < 2) continue;

        double total = 0.0;
        for (std::size_t i = 0; i + 1 < line.size(); ++i) total += distance(line[i], line[i + 1]);
        if (total == 0.0) continue;

        // 2 + floor(D/d) nodes per edge, evenly spaced along the polyline.
        const std::size_t segments = 1 + static_cast<std::size_t>(std::floor(total / split_length));
        const double spacing = total / static_cast<double>(segments);

        std::size_t seg = 0;
        double seg_start = 0.0;
        double seg_len = distance(line[0], line[1]);
        for (std::size_t k = 0; k <= segments; ++k) {
            const double target = std::min(spacing * static_cast<double>(k), total);
            while (seg + 2 < line.size() && seg_start + seg_len < target) {
                seg_start += seg_len;
                ++seg;
                seg_len = distance(line[seg], line[seg + 1]);
            }
            const double t = seg_len > 0.0 ? std::clamp((target - seg_start) / seg_len, 0.0, 1.0) : 0.0;
            const Point p = line[seg] + (line[seg + 1] - line[seg]) * t;
            nodes.push_back({p, static_cast<std::int64_t>(e)});
        }
    }
    return nodes;
}

KdTree2d::KdTree2d(std::vector<RoadNode> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) return;
    order_.resize(nodes_.size());
    std::iota(order_.begin(), order_.end(), 0);
    tree_.reserve(2 * nodes_.size() / 8 + 2);
    root_ = build(0, static_cast<std::int32_t>(nodes_.size()));
}

std::int32_t KdTree2d::build(std::int32_t begin, std::int32_t end) {
    TreeNode n;
    n.begin = begin;
    n.end = end;
    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_y = min_x, max_y = -min_x;
    for (std::int32_t i = begin; i < end; ++i) {
        const Point p = nodes_[order_[i]].position;
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    // Bounding boxes are stored widened to float so the pruning tests stay
    // conservative.
    n.min_x = std::nextafter(static_cast<float>(min_x), -std::numeric_limits<float>::infinity());
    n.max_x = std::nextafter(static_cast<float>(max_x), std::numeric_limits<float>::infinity());
    n.min_y = std::nextafter(static_cast<float>(min_y), -std::numeric_limits<float>::infinity());
    n.max_y = std::nextafter(static_cast<float>(max_y), std::numeric_limits<float>::infinity());

    constexpr std::int32_t kLeafSize = 8;
    if (end - begin <= kLeafSize) {
        n.leaf = true;
        tree_.push_back(n);
        return static_cast<std::int32_t>(tree_.size()) - 1;
    }

    n.axis = (max_x - min_x) >= (max_y - min_y) ? 0 : 1;
    const std::int32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::int32_t a, std::int32_t b) {
                         const Point pa = nodes_[a].position;
                         const Point pb = nodes_[b].position;
                         return n.axis == 0 ? pa.x < pb.x : pa.y < pb.y;
                     });
    const Point pivot = nodes_[order_[mid]].position;
    n.split = n.axis == 0 ? pivot.x : pivot.y;

    const std::int32_t self = static_cast<std::int32_t>(tree_.size());
    tree_.push_back(n);
    const std::int32_t left = build(begin, mid);
    const std::int32_t right = build(mid, end);
    tree_[self].left = left;
    tree_[self].right = right;
    return self;
}

double KdTree2d::box_distance2(const TreeNode& n, Point q) const {
    const double dx = q.x < n.min_x ? n.min_x - q.x : (q.x > n.max_x ? q.x - n.max_x : 0.0);
    const double dy = q.y < n.min_y ? n.min_y - q.y : (q.y > n.max_y ? q.y - n.max_y : 0.0);
    return dx * dx + dy * dy;
}

void KdTree2d::collect(std::int32_t node, Point q, double r2, std::vector<std::size_t>& out) const {
    const TreeNode& n = tree_[node];
    if (box_distance2(n, q) > r2) return;
    if (n.leaf) {
        for (std::int32_t i = n.begin; i < n.end; ++i) {
            const Point p = nodes_[order_[i]].position;
            const double dx = p.x - q.x, dy = p.y - q.y;
            if (dx * dx + dy * dy <= r2) out.push_back(static_cast<std::size_t>(order_[i]));
        }
        return;
    }
    collect(n.left, q, r2, out);
    collect(n.right, q, r2, out);
}

std::vector<std::size_t> KdTree2d::radius_query(Point query, double radius) const {
    std::vector<std::size_t> out;
    if (root_ < 0 || radius < 0.0) return out;
    collect(root_, query, radius * radius, out);
    std::sort(out.begin(), out.end());
    return out;
}

void KdTree2d::nearest_walk(std::int32_t node, Point q, double& best2, std::size_t& best) const {
    const TreeNode& n = tree_[node];
    if (box_distance2(n, q) > best2) return;
    if (n.leaf) {
        for (std::int32_t i = n.begin; i < n.end; ++i) {
            const Point p = nodes_[order_[i]].position;
            const double dx = p.x - q.x, dy = p.y - q.y;
            const double d2 = dx * dx + dy * dy;
            const std::size_t idx = static_cast<std::size_t>(order_[i]);
            if (d2 < best2 || (d2 == best2 && idx < best)) {
                best2 = d2;
                best = idx;
            }
        }
        return;
    }
    const double qa = n.axis == 0 ? q.x : q.y;
    const std::int32_t first = qa < n.split ? n.left : n.right;
    const std::int32_t second = qa < n.split ? n.right : n.left;
    nearest_walk(first, q, best2, best);
    nearest_walk(second, q, best2, best);
}

std::size_t KdTree2d::nearest(Point query) const {
    if (root_ < 0) throw std::logic_error("KdTree2d::nearest on empty tree");
    double best2 = std::numeric_limits<double>::infinity();
    std::size_t best = nodes_.size();
    nearest_walk(root_, query, best2, best);
    return best;
}

RoadIndex build_road_index(const RoadNetwork& net, double split_length, bool require_nonempty) {
    RoadIndex index;
    index.split_length = split_length;
    index.nodes = split_edges(net, split_length);
    if (index.nodes.empty() && require_nonempty) {
        throw std::invalid_argument("build_road_index: road network has no usable edges");
    }
    index.tree = KdTree2d(index.nodes);
    return index;
}

RoadDistanceResult nearest_road_distance(const Ring& polygon, const RoadIndex& index,
                                         const RoadNetwork& net) {
    RoadDistanceResult result;
    if (polygon.empty()) throw std::invalid_argument("nearest_road_distance: empty polygon");
    if (index.tree.empty()) return result;  // +inf sentinel, no edge

    const Point centroid = ring_centroid(polygon);
    const double poly_radius = max_vertex_distance(polygon, centroid);
    const double d = index.split_length;

    // Expanding radius until any candidate node appears (nominal 2d
    // start), beginning from the polygon's own extent.
    double radius = 2.0 * d + poly_radius;
    std::vector<std::size_t> hits = index.tree.radius_query(centroid, radius);
    while (hits.empty()) {
        radius *= 2.0;
        hits = index.tree.radius_query(centroid, radius);
    }

    auto best_over = [&](const std::vector<std::size_t>& node_ids, RoadDistanceResult current) {
        std::set<std::int64_t> edge_ids;
        for (std::size_t i : node_ids) edge_ids.insert(index.nodes[i].edge_id);
        for (std::int64_t e : edge_ids) {
            const double dist = polygon_polyline_distance(polygon, net.edges[static_cast<std::size_t>(e)]);
            if (dist < current.distance_m ||
                (dist == current.distance_m && (!current.edge_id || e < *current.edge_id))) {
                current.distance_m = dist;
                current.edge_id = e;
            }
        }
        return current;
    };
    result = best_over(hits, result);

    // Exact-capture re-query: every edge that could beat the current best
    // has a node within best + poly_radius + d/2 of the centroid (nodes are
    // at most d apart along an edge). The extra d/2 of slack absorbs
    // floating point.
    const double capture = result.distance_m + poly_radius + d;
    if (capture > radius) {
        hits = index.tree.radius_query(centroid, capture);
        result = best_over(hits, result);
    }
    return result;
}

}  // namespace barnmap
