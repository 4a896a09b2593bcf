#pragma once

// Shared helpers and independent oracles for the test suites. Oracles are
// deliberately written from first principles (no calls into the library
// code paths they check).

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "barnmap/geometry.hpp"
#include "barnmap/objects.hpp"
#include "barnmap/raster.hpp"
#include "barnmap/roads.hpp"

namespace testsupport {

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("barnmap_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string str() const { return path_.string(); }
    std::filesystem::path path() const { return path_; }

private:
    std::filesystem::path path_;
};

// ---------------------------------------------------------------------------
// Connected-components oracle: explicit-stack flood fill over 4-neighbors.

inline std::vector<std::vector<barnmap::Pixel>> flood_fill_partition(const barnmap::RasterTile& mask) {
    const int h = mask.height();
    const int w = mask.width();
    std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
    std::vector<std::vector<barnmap::Pixel>> parts;
    for (int r0 = 0; r0 < h; ++r0) {
        for (int c0 = 0; c0 < w; ++c0) {
            if (seen[static_cast<std::size_t>(r0) * w + c0] || mask.value(0, r0, c0) == 0.0) continue;
            std::vector<barnmap::Pixel> part;
            std::vector<barnmap::Pixel> stack{{r0, c0}};
            seen[static_cast<std::size_t>(r0) * w + c0] = 1;
            while (!stack.empty()) {
                const barnmap::Pixel p = stack.back();
                stack.pop_back();
                part.push_back(p);
                const int nr[4] = {p.row - 1, p.row + 1, p.row, p.row};
                const int nc[4] = {p.col, p.col, p.col - 1, p.col + 1};
                for (int k = 0; k < 4; ++k) {
                    if (nr[k] < 0 || nr[k] >= h || nc[k] < 0 || nc[k] >= w) continue;
                    const std::size_t i = static_cast<std::size_t>(nr[k]) * w + nc[k];
                    if (!seen[i] && mask.value(0, nr[k], nc[k]) != 0.0) {
                        seen[i] = 1;
                        stack.push_back({nr[k], nc[k]});
                    }
                }
            }
            std::sort(part.begin(), part.end(), [](barnmap::Pixel a, barnmap::Pixel b) {
                return a.row < b.row || (a.row == b.row && a.col < b.col);
            });
            parts.push_back(std::move(part));
        }
    }
    std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) {
        return a.front().row < b.front().row ||
               (a.front().row == b.front().row && a.front().col < b.front().col);
    });
    return parts;
}

// ---------------------------------------------------------------------------
// Minimum rotated rectangle oracles.

// Axis-aligned bounding box area of the points rotated by -theta.
inline double rotated_bbox_area(const std::vector<barnmap::Point>& pts, double cos_t, double sin_t) {
    double lo_u = std::numeric_limits<double>::infinity(), hi_u = -lo_u;
    double lo_v = lo_u, hi_v = -lo_u;
    for (const barnmap::Point& p : pts) {
        const double u = cos_t * p.x + sin_t * p.y;
        const double v = -sin_t * p.x + cos_t * p.y;
        lo_u = std::min(lo_u, u);
        hi_u = std::max(hi_u, u);
        lo_v = std::min(lo_v, v);
        hi_v = std::max(hi_v, v);
    }
    return (hi_u - lo_u) * (hi_v - lo_v);
}

// Rotation sweep: min bounding box area over a fixed orientation grid.
inline double sweep_min_rect_area(const std::vector<barnmap::Point>& pts, int steps = 180000) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < steps; ++k) {
        const double theta = k * (M_PI / steps);
        best = std::min(best, rotated_bbox_area(pts, std::cos(theta), std::sin(theta)));
    }
    return best;
}

// Exact oracle: the optimal rectangle is flush with a hull edge, and every
// hull edge joins two input vertices, so minimizing over all vertex-pair
// directions covers the optimum without computing a hull.
inline double all_pairs_min_rect_area(const std::vector<barnmap::Point>& pts) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double dx = pts[j].x - pts[i].x;
            const double dy = pts[j].y - pts[i].y;
            const double len = std::hypot(dx, dy);
            if (len == 0.0) continue;
            best = std::min(best, rotated_bbox_area(pts, dx / len, dy / len));
        }
    }
    return best;
}

// Random simple polygon: jittered radial star shape around the origin.
inline barnmap::Ring random_polygon(std::mt19937_64& rng, int min_vertices = 3, int max_vertices = 30) {
    std::uniform_int_distribution<int> nd(min_vertices, max_vertices);
    std::uniform_real_distribution<double> radius(1.0, 60.0);
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    std::uniform_real_distribution<double> center(-500.0, 500.0);
    const int n = nd(rng);
    const double cx = center(rng), cy = center(rng);
    const double stretch = 0.2 + 1.8 * jitter(rng);  // vary aspect
    barnmap::Ring ring;
    for (int i = 0; i < n; ++i) {
        const double angle = 2.0 * M_PI * (i + 0.8 * jitter(rng)) / n;
        const double r = radius(rng);
        ring.push_back({cx + r * std::cos(angle) * stretch, cy + r * std::sin(angle)});
    }
    return ring;
}

// ---------------------------------------------------------------------------
// Road distance oracle: exhaustive polygon-to-polyline minimum with its own
// distance primitives.

inline double oracle_point_seg(barnmap::Point p, barnmap::Point a, barnmap::Point b) {
    const double abx = b.x - a.x, aby = b.y - a.y;
    const double len2 = abx * abx + aby * aby;
    double t = len2 == 0.0 ? 0.0 : ((p.x - a.x) * abx + (p.y - a.y) * aby) / len2;
    t = std::max(0.0, std::min(1.0, t));
    const double qx = a.x + t * abx, qy = a.y + t * aby;
    return std::hypot(p.x - qx, p.y - qy);
}

inline double oracle_seg_seg(barnmap::Point a, barnmap::Point b, barnmap::Point c, barnmap::Point d) {
    auto orient = [](barnmap::Point p, barnmap::Point q, barnmap::Point r) {
        const double v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
        return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    };
    auto on_seg = [](barnmap::Point p, barnmap::Point q, barnmap::Point r) {
        return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
               std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    const bool meet = (o1 != o2 && o3 != o4) || (o1 == 0 && on_seg(a, b, c)) ||
                      (o2 == 0 && on_seg(a, b, d)) || (o3 == 0 && on_seg(c, d, a)) ||
                      (o4 == 0 && on_seg(c, d, b));
    if (meet) return 0.0;
    return std::min(std::min(oracle_point_seg(a, c, d), oracle_point_seg(b, c, d)),
                    std::min(oracle_point_seg(c, a, b), oracle_point_seg(d, a, b)));
}

inline bool oracle_point_in_ring(barnmap::Point p, const barnmap::Ring& ring) {
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if ((ring[i].y > p.y) != (ring[j].y > p.y)) {
            const double x = ring[j].x + (ring[i].x - ring[j].x) * (p.y - ring[j].y) /
                                             (ring[i].y - ring[j].y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

struct OracleRoadDistance {
    double distance = std::numeric_limits<double>::infinity();
    std::int64_t edge = -1;
};

inline OracleRoadDistance brute_force_road_distance(const barnmap::Ring& polygon,
                                                    const barnmap::RoadNetwork& net) {
    OracleRoadDistance out;
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const barnmap::Polyline& line = net.edges[e];
        double d = std::numeric_limits<double>::infinity();
        bool vertex_inside = false;
        for (const barnmap::Point& p : line) {
            if (oracle_point_in_ring(p, polygon)) vertex_inside = true;
        }
        if (vertex_inside) {
            d = 0.0;
        } else {
            for (std::size_t i = 0; i < polygon.size(); ++i) {
                const barnmap::Point a = polygon[i];
                const barnmap::Point b = polygon[(i + 1) % polygon.size()];
                for (std::size_t j = 0; j + 1 < line.size(); ++j) {
                    d = std::min(d, oracle_seg_seg(a, b, line[j], line[j + 1]));
                }
            }
        }
        if (d < out.distance) {
            out.distance = d;
            out.edge = static_cast<std::int64_t>(e);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spearman oracle: tie-corrected closed formula,
//   rho = (Sx + Sy - sum d^2) / (2 sqrt(Sx Sy)),
// with Sx = (n^3 - n)/12 - sum (t^3 - t)/12 over tie groups.

inline std::vector<double> oracle_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = 1.0 + 0.5 * (i + j);
        i = j + 1;
    }
    return ranks;
}

inline double tie_correction(const std::vector<double>& v) {
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    double correction = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        correction += (t * t * t - t) / 12.0;
        i = j + 1;
    }
    return correction;
}

inline double spearman_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double base = (n * n * n - n) / 12.0;
    const double sx = base - tie_correction(x);
    const double sy = base - tie_correction(y);
    const std::vector<double> rx = oracle_ranks(x);
    const std::vector<double> ry = oracle_ranks(y);
    double sum_d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = rx[i] - ry[i];
        sum_d2 += d * d;
    }
    return (sx + sy - sum_d2) / (2.0 * std::sqrt(sx * sy));
}

// ---------------------------------------------------------------------------
// Mask and raster construction helpers.

inline barnmap::RasterTile make_mask(int w, int h, const std::vector<barnmap::Pixel>& positives) {
    barnmap::RasterTile mask(w, h, 1, barnmap::Dtype::u8);
    for (const barnmap::Pixel& p : positives) mask.u8_at(0, p.row, p.col) = 1;
    return mask;
}

inline void fill_block(barnmap::RasterTile& mask, int row, int col, int height, int width) {
    for (int r = row; r < row + height; ++r) {
        for (int c = col; c < col + width; ++c) mask.u8_at(0, r, c) = 1;
    }
}

inline barnmap::RasterTile random_mask(std::mt19937_64& rng, int w, int h, double density) {
    barnmap::RasterTile mask(w, h, 1, barnmap::Dtype::u8);
    std::bernoulli_distribution bit(density);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) mask.u8_at(0, r, c) = bit(rng) ? 1 : 0;
    }
    return mask;
}

}  // namespace testsupport
