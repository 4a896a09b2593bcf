#include "barnmap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace barnmap {

double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a) { return std::hypot(a.x, a.y); }
double distance(Point a, Point b) { return norm(a - b); }

double signed_area(const Ring& ring) {
    const size_t n = ring.size();
    if (n < 3) return 0.0;
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Point& p = ring[i];
        const Point& q = ring[(i + 1) % n];
        acc += p.x * q.y - q.x * p.y;
    }
    return 0.5 * acc;
}

Point ring_centroid(const Ring& ring) {
    const size_t n = ring.size();
    if (n == 0) return {};
    const double a = signed_area(ring);
    if (std::abs(a) < 1e-12) {
        Point mean{};
        for (const Point& p : ring) mean = mean + p;
        return mean * (1.0 / static_cast<double>(n));
    }
    double cx = 0.0;
    double cy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Point& p = ring[i];
        const Point& q = ring[(i + 1) % n];
        const double w = p.x * q.y - q.x * p.y;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

double max_vertex_distance(const Ring& ring, Point from) {
    double best = 0.0;
    for (const Point& p : ring) best = std::max(best, distance(p, from));
    return best;
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Point a, Point b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const size_t n = pts.size();
    if (n < 3) return pts;

    std::vector<Point> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {  // lower
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
        while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

std::vector<PointI64> convex_hull_i64(std::vector<PointI64> pts) {
    auto crs = [](PointI64 o, PointI64 a, PointI64 b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::sort(pts.begin(), pts.end(), [](PointI64 a, PointI64 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](PointI64 a, PointI64 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const size_t n = pts.size();
    if (n < 3) return pts;

    std::vector<PointI64> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && crs(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && crs(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

std::vector<Point> MinRotatedRect::corners() const {
    const double rad = angle_deg * M_PI / 180.0;
    const Point u{std::cos(rad), std::sin(rad)};
    const Point v{-u.y, u.x};
    const double hl = 0.5 * long_side;
    const double hs = 0.5 * short_side;
    return {
        center + u * hl + v * hs,
        center - u * hl + v * hs,
        center - u * hl - v * hs,
        center + u * hl - v * hs,
    };
}

MinRotatedRect min_rotated_rect(const Ring& ring) {
    const std::vector<Point> hull = convex_hull(ring);
    if (hull.size() < 2) throw std::invalid_argument("min_rotated_rect: fewer than 3 distinct vertices");

    // The minimum-area rectangle has one side collinear with a hull edge, so
    // scan hull edges and take per-edge extents along (edge, normal).
    double best_area = std::numeric_limits<double>::infinity();
    double best_lo_u = 0, best_hi_u = 0, best_lo_v = 0, best_hi_v = 0;
    Point best_u{1.0, 0.0};

    const size_t m = hull.size();
    for (size_t i = 0; i < m; ++i) {
        const Point e = hull[(i + 1) % m] - hull[i];
        const double len = norm(e);
        if (len == 0.0) continue;
        const Point u{e.x / len, e.y / len};
        const Point v{-u.y, u.x};
        double lo_u = std::numeric_limits<double>::infinity(), hi_u = -lo_u;
        double lo_v = lo_u, hi_v = -lo_u;
        for (const Point& p : hull) {
            const double pu = dot(p, u);
            const double pv = dot(p, v);
            lo_u = std::min(lo_u, pu);
            hi_u = std::max(hi_u, pu);
            lo_v = std::min(lo_v, pv);
            hi_v = std::max(hi_v, pv);
        }
        const double area = (hi_u - lo_u) * (hi_v - lo_v);
        if (area < best_area) {
            best_area = area;
            best_u = u;
            best_lo_u = lo_u;
            best_hi_u = hi_u;
            best_lo_v = lo_v;
            best_hi_v = hi_v;
        }
    }
    if (!std::isfinite(best_area)) throw std::invalid_argument("min_rotated_rect: degenerate input");

    const double du = best_hi_u - best_lo_u;
    const double dv = best_hi_v - best_lo_v;
    if (du <= 0.0 || dv <= 0.0) throw std::invalid_argument("min_rotated_rect: collinear input");

    const Point v{-best_u.y, best_u.x};
    const double cu = 0.5 * (best_lo_u + best_hi_u);
    const double cv = 0.5 * (best_lo_v + best_hi_v);

    MinRotatedRect rect;
    rect.center = best_u * cu + v * cv;
    double angle = std::atan2(best_u.y, best_u.x) * 180.0 / M_PI;
    if (du >= dv) {
        rect.long_side = du;
        rect.short_side = dv;
    } else {
        rect.long_side = dv;
        rect.short_side = du;
        angle += 90.0;
    }
    angle = std::fmod(angle, 180.0);
    if (angle < 0.0) angle += 180.0;
    if (angle == 180.0) angle = 0.0;
    rect.angle_deg = angle;
    return rect;
}

double point_segment_distance(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    double t = dot(p - a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + ab * t);
}

static int orientation_sign(Point a, Point b, Point c) {
    const double v = cross(b - a, c - a);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

static bool on_segment(Point a, Point b, Point p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
    const int o1 = orientation_sign(a, b, c);
    const int o2 = orientation_sign(a, b, d);
    const int o3 = orientation_sign(c, d, a);
    const int o4 = orientation_sign(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

double segment_segment_distance(Point a, Point b, Point c, Point d) {
    if (segments_intersect(a, b, c, d)) return 0.0;
    double best = point_segment_distance(a, c, d);
    best = std::min(best, point_segment_distance(b, c, d));
    best = std::min(best, point_segment_distance(c, a, b));
    best = std::min(best, point_segment_distance(d, a, b));
    return best;
}

bool point_in_ring(Point p, const Ring& ring) {
    const size_t n = ring.size();
    bool inside = false;
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = ring[i];
        const Point& b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

double polygon_polyline_distance(const Ring& polygon, const Polyline& line) {
    if (polygon.empty() || line.size() < 2) return std::numeric_limits<double>::infinity();

    // Any line vertex inside the filled polygon means contact; a crossing
    // without interior vertices is caught by the segment tests below.
    for (const Point& p : line) {
        if (point_in_ring(p, polygon)) return 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    const size_t n = polygon.size();
    for (size_t i = 0; i < n; ++i) {
        const Point& a = polygon[i];
        const Point& b = polygon[(i + 1) % n];
        for (size_t j = 0; j + 1 < line.size(); ++j) {
            best = std::min(best, segment_segment_distance(a, b, line[j], line[j + 1]));
            if (best == 0.0) return 0.0;
        }
    }
    return best;
}

double polygon_polygon_distance(const Ring& a, const Ring& b) {
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    if (point_in_ring(a[0], b) || point_in_ring(b[0], a)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    const size_t n = a.size();
    const size_t m = b.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < m; ++j) {
            best = std::min(best, segment_segment_distance(a[i], a[(i + 1) % n], b[j], b[(j + 1) % m]));
            if (best == 0.0) return 0.0;
        }
    }
    return best;
}

}  // namespace barnmap
