#include "barnmap/objects.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace barnmap {

RasterTile threshold(const RasterTile& prob, double tau) {
    if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("threshold: tau must be in [0, 1]");
    if (prob.bands() != 1) throw std::invalid_argument("threshold: expected a single-band raster");
    RasterTile mask(prob.width(), prob.height(), 1, Dtype::u8);
    mask.geo = prob.geo;
    mask.timestamp = prob.timestamp;
    for (int r = 0; r < prob.height(); ++r) {
        for (int c = 0; c < prob.width(); ++c) {
            mask.u8_at(0, r, c) = prob.value(0, r, c) >= tau ? 1 : 0;
        }
    }
    return mask;
}

std::vector<ConnectedComponent> connected_components(const RasterTile& mask) {
    if (mask.bands() != 1) throw std::invalid_argument("connected_components: expected a single-band mask");
    const int h = mask.height();
    const int w = mask.width();
    std::vector<std::uint8_t> visited(static_cast<std::size_t>(w) * h, 0);
    auto positive = [&](int r, int c) { return mask.value(0, r, c) != 0.0; };

    std::vector<ConnectedComponent> out;
    std::vector<Pixel> stack;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * w + c;
            if (visited[i] || !positive(r, c)) continue;

            ConnectedComponent comp;
            comp.min_row = comp.max_row = r;
            comp.min_col = comp.max_col = c;
            stack.push_back({r, c});
            visited[i] = 1;
            while (!stack.empty()) {
                const Pixel p = stack.back();
                stack.pop_back();
                comp.pixels.push_back(p);
                comp.min_row = std::min(comp.min_row, p.row);
                comp.max_row = std::max(comp.max_row, p.row);
                comp.min_col = std::min(comp.min_col, p.col);
                comp.max_col = std::max(comp.max_col, p.col);
                const int nr[4] = {p.row - 1, p.row + 1, p.row, p.row};
                const int nc[4] = {p.col, p.col, p.col - 1, p.col + 1};
                for (int k = 0; k < 4; ++k) {
                    if (nr[k] < 0 || nr[k] >= h || nc[k] < 0 || nc[k] >= w) continue;
                    const std::size_t ni = static_cast<std::size_t>(nr[k]) * w + nc[k];
                    if (!visited[ni] && positive(nr[k], nc[k])) {
                        visited[ni] = 1;
                        stack.push_back({nr[k], nc[k]});
                    }
                }
            }
            std::sort(comp.pixels.begin(), comp.pixels.end(), [](Pixel a, Pixel b) {
                return a.row < b.row || (a.row == b.row && a.col < b.col);
            });
            out.push_back(std::move(comp));
        }
    }
    return out;
}

namespace {

// Directed boundary edges in pixel-corner coordinates (x = col, y = row,
// y grows downward), oriented so the component is on the walker's right.
// Directions: 0 = +x, 1 = +y, 2 = -x, 3 = -y.
constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};

std::uint64_t corner_key(int x, int y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
           static_cast<std::uint32_t>(y);
}

struct BoundaryEdges {
    // outgoing[corner] -> bitmask of unconsumed edge directions
    std::unordered_map<std::uint64_t, std::uint8_t> outgoing;
    std::vector<std::pair<std::pair<int, int>, int>> all;  // ((x, y), dir), sorted
};

BoundaryEdges collect_boundary_edges(const ConnectedComponent& comp) {
    const int bw = comp.max_col - comp.min_col + 1;
    const int bh = comp.max_row - comp.min_row + 1;
    std::vector<std::uint8_t> in(static_cast<std::size_t>(bw) * bh, 0);
    auto member = [&](int r, int c) {
        if (r < comp.min_row || r > comp.max_row || c < comp.min_col || c > comp.max_col) return false;
        return in[static_cast<std::size_t>(r - comp.min_row) * bw + (c - comp.min_col)] != 0;
    };
    for (const Pixel& p : comp.pixels) {
        in[static_cast<std::size_t>(p.row - comp.min_row) * bw + (p.col - comp.min_col)] = 1;
    }

    BoundaryEdges edges;
    for (const Pixel& p : comp.pixels) {
        const int x = p.col, y = p.row;
        if (!member(y - 1, x)) edges.all.push_back({{x, y}, 0});          // top: walk +x
        if (!member(y, x + 1)) edges.all.push_back({{x + 1, y}, 1});      // right: walk +y
        if (!member(y + 1, x)) edges.all.push_back({{x + 1, y + 1}, 2});  // bottom: walk -x
        if (!member(y, x - 1)) edges.all.push_back({{x, y + 1}, 3});      // left: walk -y
    }
    std::sort(edges.all.begin(), edges.all.end(), [](const auto& a, const auto& b) {
        if (a.first.second != b.first.second) return a.first.second < b.first.second;
        if (a.first.first != b.first.first) return a.first.first < b.first.first;
        return a.second < b.second;
    });
    for (const auto& [corner, dir] : edges.all) {
        edges.outgoing[corner_key(corner.first, corner.second)] |= static_cast<std::uint8_t>(1u << dir);
    }
    return edges;
}

void drop_collinear(std::vector<PointI64>& ring) {
    std::vector<PointI64> out;
    const size_t n = ring.size();
    for (size_t i = 0; i < n; ++i) {
        const PointI64& prev = ring[(i + n - 1) % n];
        const PointI64& cur = ring[i];
        const PointI64& next = ring[(i + 1) % n];
        const std::int64_t turn =
            (cur.x - prev.x) * (next.y - cur.y) - (cur.y - prev.y) * (next.x - cur.x);
        if (turn != 0) out.push_back(cur);
    }
    ring = std::move(out);
}

double ring_area_i64(const std::vector<PointI64>& ring) {
    // Shoelace in corner coordinates (y down), so sign is flipped relative
    // to the geographic frame.
    long long acc = 0;
    const size_t n = ring.size();
    for (size_t i = 0; i < n; ++i) {
        const PointI64& p = ring[i];
        const PointI64& q = ring[(i + 1) % n];
        acc += p.x * q.y - q.x * p.y;
    }
    return 0.5 * static_cast<double>(acc);
}

}  // namespace

std::vector<PointI64> trace_boundary_pixels(const ConnectedComponent& comp) {
    if (comp.pixels.empty()) throw std::invalid_argument("trace_boundary_pixels: empty component");
    BoundaryEdges edges = collect_boundary_edges(comp);

    std::vector<std::vector<PointI64>> loops;
    size_t next_seed = 0;
    while (true) {
        // Deterministic loop seeds: smallest unconsumed edge.
        while (next_seed < edges.all.size()) {
            const auto& [corner, dir] = edges.all[next_seed];
            const auto it = edges.outgoing.find(corner_key(corner.first, corner.second));
            if (it != edges.outgoing.end() && (it->second & (1u << dir))) break;
            ++next_seed;
        }
        if (next_seed == edges.all.size()) break;

        const auto [start, start_dir] = edges.all[next_seed];
        std::vector<PointI64> loop;
        int x = start.first, y = start.second;
        int dir = start_dir;
        for (;;) {
            loop.push_back({x, y});
            edges.outgoing[corner_key(x, y)] &= static_cast<std::uint8_t>(~(1u << dir));
            x += kDx[dir];
            y += kDy[dir];
            // Rightmost-turn preference keeps the component hugged on the
            // right and splits corner-touching passes instead of crossing.
            // The consumed start edge re-enters the candidate set so the
            // closing step competes under the same preference.
            std::uint8_t avail = edges.outgoing[corner_key(x, y)];
            const bool at_start = x == start.first && y == start.second;
            if (at_start) avail |= static_cast<std::uint8_t>(1u << start_dir);
            const int right = (dir + 1) & 3;
            const int left = (dir + 3) & 3;
            int chosen = -1;
            if (avail & (1u << right)) {
                chosen = right;
            } else if (avail & (1u << dir)) {
                chosen = dir;
            } else if (avail & (1u << left)) {
                chosen = left;
            }
            if (chosen < 0 || (at_start && chosen == start_dir)) break;  // loop closed
            dir = chosen;
        }
        loops.push_back(std::move(loop));
    }

    // Outer boundary encloses everything, so it has the largest magnitude.
    size_t best = 0;
    double best_area = -1.0;
    for (size_t i = 0; i < loops.size(); ++i) {
        const double a = std::abs(ring_area_i64(loops[i]));
        if (a > best_area) {
            best_area = a;
            best = i;
        }
    }
    std::vector<PointI64> ring = std::move(loops[best]);
    drop_collinear(ring);

    // Canonical start: lexicographically smallest corner.
    const auto begin = std::min_element(ring.begin(), ring.end(), [](PointI64 a, PointI64 b) {
        return a.y < b.y || (a.y == b.y && a.x < b.x);
    });
    std::rotate(ring.begin(), begin, ring.end());
    return ring;
}

Ring trace_polygon(const ConnectedComponent& comp, const Geotransform& geo) {
    std::vector<PointI64> corners = trace_boundary_pixels(comp);
    Ring ring;
    ring.reserve(corners.size());
    for (const PointI64& c : corners) {
        ring.push_back(geo.pixel_to_geo(static_cast<double>(c.y), static_cast<double>(c.x)));
    }
    // The y flip of pixel_to_geo reverses orientation; emit counter-clockwise.
    if (signed_area(ring) < 0.0) std::reverse(ring.begin(), ring.end());
    return ring;
}

DetectedObject object_features(const ConnectedComponent& comp, const RasterTile& prob) {
    if (comp.pixels.empty()) throw std::invalid_argument("object_features: empty component");

    // Exact integer hull over pixel corners, scaled to meters afterwards.
    std::vector<PointI64> corners;
    corners.reserve(comp.pixels.size() * 4);
    for (const Pixel& p : comp.pixels) {
        corners.push_back({p.col, p.row});
        corners.push_back({p.col + 1, p.row});
        corners.push_back({p.col, p.row + 1});
        corners.push_back({p.col + 1, p.row + 1});
    }
    const std::vector<PointI64> hull = convex_hull_i64(std::move(corners));
    Ring hull_geo;
    hull_geo.reserve(hull.size());
    for (const PointI64& c : hull) {
        hull_geo.push_back(prob.geo.pixel_to_geo(static_cast<double>(c.y), static_cast<double>(c.x)));
    }
    const MinRotatedRect rect = min_rotated_rect(hull_geo);

    DetectedObject obj;
    obj.polygon = trace_polygon(comp, prob.geo);
    obj.area_m2 = rect.area();
    obj.aspect_ratio = rect.aspect_ratio();
    obj.orientation_deg = rect.angle_deg;
    obj.timestamp = prob.timestamp;
    obj.pixels = comp.pixels;

    double sum = 0.0;
    for (const Pixel& p : comp.pixels) sum += prob.value(0, p.row, p.col);
    obj.mean_probability = sum / static_cast<double>(comp.pixels.size());
    return obj;
}

std::vector<DetectedObject> extract_objects(const RasterTile& prob, double tau) {
    const RasterTile mask = threshold(prob, tau);
    std::vector<DetectedObject> out;
    for (const ConnectedComponent& comp : connected_components(mask)) {
        out.push_back(object_features(comp, prob));
    }
    return out;
}

}  // namespace barnmap
