#include "visopt/free_space.hpp"

#include <algorithm>
#include <cmath>

#include "visopt/errors.hpp"

namespace visopt {

namespace {

constexpr double kGrazeAngle = 1e-10;

std::vector<Point2> ring_of(const Polygon& p) { return p.vertices(); }

/// Parameters t > tmin at which the line origin + t·dir meets boundary edges
/// (crossings, vertex touches, collinear overlaps), sorted and de-duplicated.
std::vector<double> ray_events(const FreeSpace& fs, Point2 o, Point2 d, double tmin, double tmax) {
  const double eps = fs.eps_geom();
  std::vector<double> ts;
  for (const BoundaryEdge& e : fs.edges()) {
    const Point2 a = fs.vertex(e.a);
    const Point2 b = fs.vertex(e.b);
    double ca = cross(d, a - o);
    double cb = cross(d, b - o);
    const bool za = std::abs(ca) <= eps;
    const bool zb = std::abs(cb) <= eps;
    if (za) ts.push_back(dot(a - o, d));
    if (zb) ts.push_back(dot(b - o, d));
    if (!za && !zb && ((ca < 0) != (cb < 0))) {
      const Point2 p = lerp(a, b, ca / (ca - cb));
      ts.push_back(dot(p - o, d));
    }
  }
  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts) {
    if (t > tmin && t < tmax) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  std::vector<double> uniq;
  for (double t : out) {
    if (uniq.empty() || t - uniq.back() > eps) uniq.push_back(t);
  }
  return uniq;
}

}  // namespace

FreeSpace::FreeSpace(Environment env) : env_(std::move(env)) {
  diameter_ = visopt::diameter(env_.outer.vertices());
  eps_geom_ = 1e-9 * diameter_;
  eps_rv_ = 1e-4 * diameter_;

  if (!is_strictly_simple(env_.outer.vertices(), eps_geom_)) {
    throw Error(ErrorKind::InvalidPolygon, "outer boundary is not strictly simple");
  }
  const bool outer_reversed = env_.outer.orientation() != Orientation::ccw;
  env_.outer = env_.outer.with_orientation(Orientation::ccw);
  std::vector<bool> hole_reversed;
  for (std::size_t h = 0; h < env_.holes.size(); ++h) {
    Polygon& hole = env_.holes[h];
    if (!is_strictly_simple(hole.vertices(), eps_geom_)) {
      throw Error(ErrorKind::InvalidPolygon, "hole " + std::to_string(h) + " is not strictly simple");
    }
    hole_reversed.push_back(hole.orientation() != Orientation::cw);
    hole = hole.with_orientation(Orientation::cw);
  }

  const auto outer = ring_of(env_.outer);
  for (std::size_t h = 0; h < env_.holes.size(); ++h) {
    const auto ring = ring_of(env_.holes[h]);
    for (const Point2& v : ring) {
      if (classify_point(outer, v, eps_geom_) != PointClass::interior) {
        throw Error(ErrorKind::HoleOutsideOuter, "hole " + std::to_string(h) + " is not strictly inside the outer boundary");
      }
    }
    for (std::size_t i = 0; i < ring.size(); ++i) {
      for (std::size_t j = 0; j < outer.size(); ++j) {
        if (segments_intersect(ring[i], ring[(i + 1) % ring.size()], outer[j], outer[(j + 1) % outer.size()], eps_geom_)) {
          throw Error(ErrorKind::HoleOutsideOuter, "hole " + std::to_string(h) + " touches the outer boundary");
        }
      }
    }
  }
  for (std::size_t h = 0; h < env_.holes.size(); ++h) {
    const auto a = ring_of(env_.holes[h]);
    for (std::size_t g = h + 1; g < env_.holes.size(); ++g) {
      const auto b = ring_of(env_.holes[g]);
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
          if (segments_intersect(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()], eps_geom_)) {
            throw Error(ErrorKind::OverlappingHoles,
                        "holes " + std::to_string(h) + " and " + std::to_string(g) + " intersect");
          }
        }
      }
      if (classify_point(b, a[0], eps_geom_) != PointClass::exterior ||
          classify_point(a, b[0], eps_geom_) != PointClass::exterior) {
        throw Error(ErrorKind::OverlappingHoles,
                    "holes " + std::to_string(h) + " and " + std::to_string(g) + " are nested");
      }
    }
  }

  auto add_ring = [&](const Polygon& poly, std::size_t ring_id, bool reversed) {
    const std::size_t base = vertices_.size();
    const std::size_t n = poly.size();
    for (std::size_t k = 0; k < n; ++k) {
      vertices_.push_back(poly[k]);
      provenance_.push_back({ring_id, reversed ? (n - k) % n : k});
      pred_.push_back(base + (k + n - 1) % n);
      succ_.push_back(base + (k + 1) % n);
      edges_.push_back({base + k, base + (k + 1) % n});
    }
  };
  add_ring(env_.outer, 0, outer_reversed);
  for (std::size_t h = 0; h < env_.holes.size(); ++h) add_ring(env_.holes[h], h + 1, hole_reversed[h]);

  reflex_lookup_.assign(vertices_.size(), -1);
  for (std::size_t id = 0; id < vertices_.size(); ++id) {
    const Point2 p = vertices_[pred_[id]];
    const Point2 v = vertices_[id];
    const Point2 s = vertices_[succ_[id]];
    // Free space is on the left, so a right turn opens more than π of it.
    if (orient(p, v, s, eps_geom_) < 0) {
      reflex_lookup_[id] = static_cast<std::ptrdiff_t>(reflex_.size());
      reflex_.push_back({id, v, UnitVector2::from(p - v), UnitVector2::from(s - v)});
    }
  }

  area_ = env_.outer.area();
  for (const Polygon& h : env_.holes) area_ -= h.area();
}

std::optional<std::size_t> FreeSpace::reflex_index(std::size_t vertex_id) const {
  if (vertex_id >= reflex_lookup_.size() || reflex_lookup_[vertex_id] < 0) return std::nullopt;
  return static_cast<std::size_t>(reflex_lookup_[vertex_id]);
}

std::optional<std::size_t> FreeSpace::find_vertex(Point2 p) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (distance(vertices_[i], p) <= eps_geom_) return i;
  }
  return std::nullopt;
}

Quadrant FreeSpace::quadrant(const ReflexVertexInfo& r, Point2 x) const {
  const Point2 w = x - r.vertex;
  const Point2 e1 = r.e1_hat.vec();
  const Point2 e2 = r.e2_hat.vec();
  const double det = cross(e1, e2);
  double ca = cross(w, e2);
  double cb = cross(e1, w);
  if (std::abs(ca) <= eps_geom_) ca = 0.0;
  if (std::abs(cb) <= eps_geom_) cb = 0.0;
  const double alpha = ca / det;
  const double beta = cb / det;
  if (alpha > 0 && beta > 0) return Quadrant::M1;
  if (alpha < 0 && beta < 0) return Quadrant::M3;
  if (alpha >= 0 && beta <= 0) return Quadrant::M2;
  return Quadrant::M4;
}

FreeSpace build_free_space(Environment env) { return FreeSpace(std::move(env)); }

double boundary_distance(const FreeSpace& fs, Point2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (const BoundaryEdge& e : fs.edges()) {
    best = std::min(best, point_segment_distance(p, fs.vertex(e.a), fs.vertex(e.b)));
  }
  return best;
}

PointClass point_in_free_space(const FreeSpace& fs, Point2 p) {
  if (!is_finite(p)) return PointClass::exterior;
  if (boundary_distance(fs, p) <= fs.eps_geom()) return PointClass::boundary;
  const Environment& env = fs.environment();
  if (classify_point(env.outer.vertices(), p, 0.0) != PointClass::interior) return PointClass::exterior;
  for (const Polygon& h : env.holes) {
    if (classify_point(h.vertices(), p, 0.0) == PointClass::interior) return PointClass::exterior;
  }
  return PointClass::interior;
}

bool segment_in_free_space(const FreeSpace& fs, Point2 a, Point2 b) {
  if (point_in_free_space(fs, a) == PointClass::exterior) return false;
  if (point_in_free_space(fs, b) == PointClass::exterior) return false;
  const double len = distance(a, b);
  if (len <= fs.eps_geom()) return true;
  const Point2 d = (b - a) / len;
  std::vector<double> ts = ray_events(fs, a, d, 0.0, len);
  double prev = 0.0;
  ts.push_back(len);
  for (double t : ts) {
    if (t - prev > 0.0) {
      const Point2 mid = a + (0.5 * (prev + t)) * d;
      if (point_in_free_space(fs, mid) == PointClass::exterior) return false;
    }
    prev = t;
  }
  return true;
}

double free_run_length(const FreeSpace& fs, Point2 origin, UnitVector2 dir) {
  const Point2 d = dir.vec();
  const double far = 4.0 * fs.diameter() + norm(origin);
  std::vector<double> ts = ray_events(fs, origin, d, fs.eps_geom(), far);
  double prev = 0.0;
  for (double t : ts) {
    const Point2 mid = origin + (0.5 * (prev + t)) * d;
    if (point_in_free_space(fs, mid) == PointClass::exterior) return prev;
    prev = t;
  }
  return prev;
}

namespace {

ProjectedRay make_ray(const FreeSpace& fs, Point2 origin, Point2 dir_vec) {
  const UnitVector2 dir = UnitVector2::from(dir_vec);
  ProjectedRay ray{origin, dir};
  const double len = free_run_length(fs, origin, dir);
  ray.length = len > fs.eps_geom() ? len : std::numeric_limits<double>::infinity();
  const double lp = free_run_length(fs, origin, UnitVector2::from(rotate(dir.vec(), kGrazeAngle)));
  const double lm = free_run_length(fs, origin, UnitVector2::from(rotate(dir.vec(), -kGrazeAngle)));
  const double tol = 1e-6 * fs.diameter();
  ray.grazing = std::abs(lp - lm) > tol;
  return ray;
}

}  // namespace

ProjectedRay project_ray(const FreeSpace& fs, Point2 v, Point2 x) {
  return project_rotated_ray(fs, v, x, 0.0);
}

ProjectedRay project_rotated_ray(const FreeSpace& fs, Point2 v, Point2 x, double theta) {
  if (distance(v, x) <= fs.eps_geom()) {
    throw Error(ErrorKind::DegenerateRay, "ray origin coincides with the observer");
  }
  return make_ray(fs, v, rotate(v - x, -theta));
}

std::vector<ProjectedRay> ray_bundle(const FreeSpace& fs, Point2 v, Point2 x, double theta1, double theta2,
                                     std::size_t n) {
  if (n < 2 || theta1 > theta2) throw Error(ErrorKind::DomainError, "ray_bundle needs n >= 2 and theta1 <= theta2");
  std::vector<ProjectedRay> rays;
  rays.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = theta1 + (theta2 - theta1) * static_cast<double>(i) / static_cast<double>(n - 1);
    rays.push_back(project_rotated_ray(fs, v, x, t));
  }
  return rays;
}

bool direction_feasible(const FreeSpace& fs, Point2 x, UnitVector2 nu, double h) {
  return segment_in_free_space(fs, x, x + h * nu.vec());
}

Point2 nudge_inward(const FreeSpace& fs, Point2 x) {
  const double margin = 10.0 * fs.eps_geom();
  if (point_in_free_space(fs, x) == PointClass::interior && boundary_distance(fs, x) > margin) return x;
  // Preferred direction: inward normal of the nearest edge.
  Point2 preferred{0.0, 0.0};
  double best = std::numeric_limits<double>::infinity();
  for (const BoundaryEdge& e : fs.edges()) {
    const Point2 a = fs.vertex(e.a);
    const Point2 b = fs.vertex(e.b);
    const double d = point_segment_distance(x, a, b);
    if (d < best) {
      best = d;
      preferred = perp(b - a);
    }
  }
  // At a vertex the edge normal may point into an obstacle, so try a fan.
  std::vector<Point2> dirs;
  if (norm(preferred) > 0) dirs.push_back(preferred / norm(preferred));
  for (int k = 0; k < 64; ++k) dirs.push_back(rotate({1.0, 0.0}, 2.0 * kPi * k / 64.0 + 0.013));
  for (double step = 1e-8 * fs.diameter(); step < 1e-2 * fs.diameter(); step *= 2.0) {
    for (const Point2& d : dirs) {
      const Point2 p = x + step * d;
      if (point_in_free_space(fs, p) == PointClass::interior && boundary_distance(fs, p) > margin &&
          segment_in_free_space(fs, x, p)) {
        return p;
      }
    }
  }
  throw Error(ErrorKind::ObserverOutsideFreeSpace, "cannot move observer into the free-space interior");
}

}  // namespace visopt
