#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace hamrep {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

using Vec3 = std::array<double, 3>;

struct Ball2 {
    Vec2 center;
    double radius = 0.0;
};

// Compact convex polygon, vertices counterclockwise, no three collinear.
// One vertex is a point, two vertices a segment.
class ConvexPolygon {
public:
    // Convex hull of arbitrary points; throws EmptyBody on empty or non-finite input.
    static ConvexPolygon hull(std::span<const Vec2> points);
    static ConvexPolygon point(Vec2 p);
    // Regular n-gon inscribed in the ball, vertex 0 at angle 0.
    static ConvexPolygon regular(Ball2 ball, int n);
    static ConvexPolygon box(double x0, double y0, double x1, double y1);

    const std::vector<Vec2>& vertices() const { return v_; }
    std::size_t size() const { return v_.size(); }
    bool is_point() const { return v_.size() == 1; }
    bool is_segment() const { return v_.size() == 2; }
    double area() const;
    // Largest vertex norm; used to scale tolerances.
    double scale() const;

private:
    std::vector<Vec2> v_;
};

struct SupportResult2 {
    double value;
    Vec2 point;
};

SupportResult2 support(const ConvexPolygon& body, Vec2 dir);
double distance(Vec2 y, const ConvexPolygon& body);
Vec2 project_point(Vec2 y, const ConvexPolygon& body);
double hausdorff(const ConvexPolygon& a, const ConvexPolygon& b);
ConvexPolygon minkowski_inflate(const ConvexPolygon& body, double r_v, double r_eta);
bool contains_body(const ConvexPolygon& outer, const ConvexPolygon& inner, double tol);
// Largest distance from a vertex of inner to outer (0 when contained).
double excess(const ConvexPolygon& inner, const ConvexPolygon& outer);

inline constexpr double kArcStepDegrees = 0.5;

// P(y,K) = K ∩ B(y, 2 d(y,K)); circular arcs sampled at kArcStepDegrees.
ConvexPolygon proj_map(Vec2 y, const ConvexPolygon& body);

// Intersection with a closed disc (arcs sampled as above). Throws EmptyResult when empty.
ConvexPolygon intersect_disc(const ConvexPolygon& body, Ball2 disc);
// Intersection of two polygons. Throws EmptyResult when empty.
ConvexPolygon intersect(const ConvexPolygon& a, const ConvexPolygon& b);

inline constexpr int kDefaultSteinerDirections = 3600;

// Steiner point by averaging the minimal-norm support point over n_dirs equally
// spaced directions.
Vec2 steiner(const ConvexPolygon& body, int n_dirs = kDefaultSteinerDirections);

// Approximate 3-D body stored as support samples on a fixed direction set.
class SupportBody3 {
public:
    // Samples the hull of the given points on n_dirs quasi-uniform directions
    // (Fibonacci lattice under a seeded rotation).
    static SupportBody3 from_points(std::span<const Vec3> points, int n_dirs = 2000,
                                    std::uint64_t seed = 1);

    const std::vector<Vec3>& directions() const { return dirs_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<Vec3>& points() const { return points_; }

private:
    std::vector<Vec3> dirs_;
    std::vector<double> values_;
    std::vector<Vec3> points_;
};

struct SupportResult3 {
    double value;
    Vec3 point;
};

SupportResult3 support(const SupportBody3& body, Vec3 dir);
// Distance to the outer approximation given by the stored half-spaces.
double distance(const Vec3& y, const SupportBody3& body);
// Max support-function gap over both direction sets.
double hausdorff(const SupportBody3& a, const SupportBody3& b);
Vec3 steiner(const SupportBody3& body);

// Runtime-dispatched body of dimension 2 or 3.
class ConvexBody {
public:
    ConvexBody(ConvexPolygon p) : rep_(std::move(p)) {}
    ConvexBody(SupportBody3 s) : rep_(std::move(s)) {}

    int dim() const { return std::holds_alternative<ConvexPolygon>(rep_) ? 2 : 3; }
    const ConvexPolygon& polygon() const;
    const SupportBody3& support_body() const;

private:
    std::variant<ConvexPolygon, SupportBody3> rep_;
};

// Throws DimMismatch when the dimensions differ.
double hausdorff(const ConvexBody& a, const ConvexBody& b);
bool contains_body(const ConvexBody& outer, const ConvexBody& inner, double tol);

}  // namespace hamrep
