#pragma once

#include <cstdint>
#include <vector>

namespace barnmap {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }

double dot(Point a, Point b);
double cross(Point a, Point b);
double norm(Point a);
double distance(Point a, Point b);

// Open polyline or closed ring, vertices in order. Rings are stored without
// repeating the first vertex.
using Ring = std::vector<Point>;
using Polyline = std::vector<Point>;

// Signed shoelace area; positive for counter-clockwise rings.
double signed_area(const Ring& ring);

// Area centroid of a simple ring (falls back to the vertex mean for
// degenerate rings of zero area).
Point ring_centroid(const Ring& ring);

// Largest vertex distance from a given point. Used to size exact-capture
// query radii around polygon centroids.
double max_vertex_distance(const Ring& ring, Point from);

// Convex hull (monotone chain), counter-clockwise, collinear points dropped.
std::vector<Point> convex_hull(std::vector<Point> pts);

// Integer-lattice variant for pixel-corner rings; all orientation tests are
// exact in 64-bit arithmetic.
struct PointI64 {
    std::int64_t x = 0;
    std::int64_t y = 0;
};
std::vector<PointI64> convex_hull_i64(std::vector<PointI64> pts);

// Smallest-area enclosing rectangle of a point set. One rectangle edge is
// collinear with a convex hull edge (rotating calipers search space).
struct MinRotatedRect {
    Point center;
    double long_side = 0.0;
    double short_side = 0.0;
    // Orientation of the long side, counter-clockwise from east, in [0, 180).
    double angle_deg = 0.0;

    double area() const { return long_side * short_side; }
    double aspect_ratio() const { return long_side / short_side; }
    // Corner points of the rectangle, counter-clockwise.
    std::vector<Point> corners() const;
};

// Throws std::invalid_argument for fewer than 3 distinct vertices or a
// collinear (zero short side) input.
MinRotatedRect min_rotated_rect(const Ring& ring);

double point_segment_distance(Point p, Point a, Point b);
double segment_segment_distance(Point a, Point b, Point c, Point d);
bool segments_intersect(Point a, Point b, Point c, Point d);

// Ray-casting containment test. Points exactly on the boundary may land on
// either side; callers that care use distance tests instead.
bool point_in_ring(Point p, const Ring& ring);

// Minimum Euclidean distance between a filled simple polygon and a polyline;
// 0 when they touch, cross, or the polyline runs inside the polygon.
double polygon_polyline_distance(const Ring& polygon, const Polyline& line);

// Minimum distance between two filled simple polygons; 0 on overlap.
double polygon_polygon_distance(const Ring& a, const Ring& b);

}  // namespace barnmap
