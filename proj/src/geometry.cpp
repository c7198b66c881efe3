#include "visopt/geometry.hpp"

#include <algorithm>
#include <limits>

#include "visopt/errors.hpp"

namespace visopt {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPolygon: return "InvalidPolygon";
    case ErrorKind::HoleOutsideOuter: return "HoleOutsideOuter";
    case ErrorKind::OverlappingHoles: return "OverlappingHoles";
    case ErrorKind::DegenerateRay: return "DegenerateRay";
    case ErrorKind::ObserverOutsideFreeSpace: return "ObserverOutsideFreeSpace";
    case ErrorKind::OutsideFreeSpace: return "OutsideFreeSpace";
    case ErrorKind::ArrangementDegeneracy: return "ArrangementDegeneracy";
    case ErrorKind::TooCloseToReflexVertex: return "TooCloseToReflexVertex";
    case ErrorKind::InfeasibleDirection: return "InfeasibleDirection";
    case ErrorKind::InfiniteRay: return "InfiniteRay";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::GradientUnavailable: return "GradientUnavailable";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Point2 rotate(Point2 v, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

UnitVector2 UnitVector2::from(Point2 v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::DomainError, "cannot normalize a zero or non-finite vector");
  }
  return UnitVector2(v.x / n, v.y / n);
}

UnitVector2 UnitVector2::from_angle(double theta) {
  return UnitVector2(std::cos(theta), std::sin(theta));
}

int orient(Point2 a, Point2 b, Point2 c, double eps) {
  const double cr = cross(b - a, c - a);
  const double scale = norm(b - a);
  if (std::abs(cr) <= eps * scale) return 0;
  return cr > 0 ? 1 : -1;
}

Point2 closest_point_on_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = norm2(ab);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  return distance(p, closest_point_on_segment(p, a, b));
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d, double eps) {
  if (point_segment_distance(a, c, d) <= eps || point_segment_distance(b, c, d) <= eps ||
      point_segment_distance(c, a, b) <= eps || point_segment_distance(d, a, b) <= eps) {
    return true;
  }
  const int o1 = orient(a, b, c, eps);
  const int o2 = orient(a, b, d, eps);
  const int o3 = orient(c, d, a, eps);
  const int o4 = orient(c, d, b, eps);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

double signed_area(std::span<const Point2> ring) {
  double s = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    s += cross(ring[i], ring[(i + 1) % n]);
  }
  return 0.5 * s;
}

BBox bounding_box(std::span<const Point2> pts) {
  BBox b{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
         {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
  for (const Point2& p : pts) {
    b.lo.x = std::min(b.lo.x, p.x);
    b.lo.y = std::min(b.lo.y, p.y);
    b.hi.x = std::max(b.hi.x, p.x);
    b.hi.y = std::max(b.hi.y, p.y);
  }
  return b;
}

Polygon::Polygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) {
    throw Error(ErrorKind::InvalidPolygon, "polygon needs at least 3 vertices");
  }
  for (const Point2& p : vertices_) {
    if (!is_finite(p)) throw Error(ErrorKind::InvalidPolygon, "non-finite vertex coordinate");
  }
  signed_area_ = visopt::signed_area(vertices_);
  if (signed_area_ == 0.0) throw Error(ErrorKind::InvalidPolygon, "polygon has zero area");
}

Polygon Polygon::with_orientation(Orientation o) const {
  if (o == orientation()) return *this;
  std::vector<Point2> rev;
  rev.reserve(vertices_.size());
  rev.push_back(vertices_[0]);
  for (std::size_t i = vertices_.size() - 1; i >= 1; --i) rev.push_back(vertices_[i]);
  return Polygon(std::move(rev));
}

bool Polygon::is_convex(double eps) const {
  const int want = orientation() == Orientation::ccw ? 1 : -1;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const int o = orient(vertices_[i], vertices_[(i + 1) % n], vertices_[(i + 2) % n], eps);
    if (o != 0 && o != want) return false;
  }
  return true;
}

bool is_strictly_simple(std::span<const Point2> ring, double eps) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(ring[i], ring[(i + 1) % n]) <= eps) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = ring[i];
    const Point2 b = ring[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2 c = ring[j];
      const Point2 d = ring[(j + 1) % n];
      const bool adjacent_next = (j == i + 1);
      const bool adjacent_prev = (i == 0 && j == n - 1);
      if (adjacent_next || adjacent_prev) {
        // Shared endpoint is fine; folding back onto the neighbour is not.
        const Point2 shared = adjacent_next ? b : a;
        const Point2 other_mine = adjacent_next ? a : b;
        const Point2 other_theirs = adjacent_next ? d : c;
        if (orient(shared, other_mine, other_theirs, eps) == 0 &&
            dot(other_mine - shared, other_theirs - shared) > 0) {
          return false;
        }
        if (n == 3) continue;
        if (point_segment_distance(other_theirs, a, b) <= eps) return false;
        if (point_segment_distance(other_mine, c, d) <= eps) return false;
        continue;
      }
      if (segments_intersect(a, b, c, d, eps)) return false;
    }
  }
  return true;
}

double boundary_distance(std::span<const Point2> ring, Point2 p) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, ring[i], ring[(i + 1) % n]));
  }
  return best;
}

PointClass classify_point(std::span<const Point2> ring, Point2 p, double eps) {
  if (boundary_distance(ring, p) <= eps) return PointClass::boundary;
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = ring[i];
    const Point2 b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < xc) inside = !inside;
    }
  }
  return inside ? PointClass::interior : PointClass::exterior;
}

double diameter(std::span<const Point2> pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, distance(pts[i], pts[j]));
  }
  return d;
}

}  // namespace visopt
