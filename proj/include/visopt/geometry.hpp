#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace visopt {

constexpr double kPi = 3.14159265358979323846;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Point2 operator-(Point2 a) { return {-a.x, -a.y}; }
constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
constexpr Point2 operator/(Point2 a, double s) { return {a.x / s, a.y / s}; }

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the planar cross product a × b.
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
constexpr double norm2(Point2 a) { return a.x * a.x + a.y * a.y; }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
constexpr Point2 lerp(Point2 a, Point2 b, double t) { return a + t * (b - a); }
/// Counter-clockwise quarter turn.
constexpr Point2 perp(Point2 a) { return {-a.y, a.x}; }
Point2 rotate(Point2 v, double theta);
bool is_finite(Point2 p);

/// Direction of unit length; construction normalizes and rejects zero vectors.
class UnitVector2 {
 public:
  static UnitVector2 from(Point2 v);
  static UnitVector2 from_angle(double theta);

  double dx() const { return dx_; }
  double dy() const { return dy_; }
  Point2 vec() const { return {dx_, dy_}; }
  double angle() const { return std::atan2(dy_, dx_); }
  UnitVector2 operator-() const { return UnitVector2(-dx_, -dy_); }

 private:
  UnitVector2(double dx, double dy) : dx_(dx), dy_(dy) {}
  double dx_;
  double dy_;
};

/// Sign of the turn a→b→c, with |cross| below eps·|b−a| treated as collinear.
int orient(Point2 a, Point2 b, Point2 c, double eps);

double point_segment_distance(Point2 p, Point2 a, Point2 b);
Point2 closest_point_on_segment(Point2 p, Point2 a, Point2 b);

/// Proper or touching intersection of closed segments within eps.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d, double eps);

double signed_area(std::span<const Point2> ring);

struct BBox {
  Point2 lo;
  Point2 hi;
};
BBox bounding_box(std::span<const Point2> pts);

enum class Orientation { ccw, cw };

/// Strictly simple polygon with nonzero area; the orientation is derived from
/// the signed area, never supplied.
class Polygon {
 public:
  explicit Polygon(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  Point2 operator[](std::size_t i) const { return vertices_[i]; }
  Point2 vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }
  Orientation orientation() const { return signed_area_ > 0 ? Orientation::ccw : Orientation::cw; }
  double signed_area() const { return signed_area_; }
  double area() const { return std::abs(signed_area_); }

  Polygon with_orientation(Orientation o) const;
  bool is_convex(double eps) const;
  BBox bbox() const { return bounding_box(vertices_); }

 private:
  std::vector<Point2> vertices_;
  double signed_area_;
};

/// True when no two non-adjacent edges meet and adjacent edges only share
/// their common endpoint.
bool is_strictly_simple(std::span<const Point2> ring, double eps);

enum class PointClass { interior, boundary, exterior };

/// Classification against a single ring (either orientation).
PointClass classify_point(std::span<const Point2> ring, Point2 p, double eps);

double boundary_distance(std::span<const Point2> ring, Point2 p);

/// Diameter of the vertex set.
double diameter(std::span<const Point2> pts);

}  // namespace visopt
