#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "visopt/free_space.hpp"
#include "visopt/geometry.hpp"
#include "visopt/random.hpp"

/// Shared environments and independent oracles. The oracles deliberately use
/// their own point-in-polygon and crossing tests rather than the library's.
namespace fixtures {

using visopt::Point2;
using visopt::Polygon;

inline visopt::Environment ref_environment() {
  return {Polygon({{-1, -1}, {11, -1}, {11, 1}, {9, 1}, {9, 5}, {1, 5}, {1, 1}, {-1, 1}}),
          {Polygon({{3, 1}, {7, 1}, {7, 3}, {3, 3}})}};
}

inline Polygon lshape_d2() { return Polygon({{5, 3}, {9, 3}, {9, 5}, {5, 5}}); }
inline Polygon strip_d1() { return Polygon({{-1, -1}, {11, -1}, {11, 1}, {-1, 1}}); }
inline Polygon strip_d2() { return Polygon({{1, 3}, {9, 3}, {9, 5}, {1, 5}}); }

/// Named reflex vertices of the reference environment.
inline const std::map<std::string, Point2>& ref_named() {
  static const std::map<std::string, Point2> names{{"q3", {1, 1}}, {"q6", {9, 1}}, {"o1", {3, 1}},
                                                   {"o2", {7, 1}}, {"o3", {7, 3}}, {"o4", {3, 3}}};
  return names;
}

inline visopt::Environment square_environment(double side = 1.0) {
  return {Polygon({{0, 0}, {side, 0}, {side, side}, {0, side}}), {}};
}

inline visopt::Environment square_with_hole() {
  return {Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), {Polygon({{0.3, 0.3}, {0.7, 0.3}, {0.7, 0.7}, {0.3, 0.7}})}};
}

/// Two gabled rooms joined to a corridor through narrow windows, with hiding
/// pockets at the corridor ends; (0,0) is a symmetric saddle of the metric.
inline visopt::Environment saddle_environment() {
  return {Polygon({{-6, -3}, {-5, -3}, {-5, -1}, {-0.5, -1}, {-0.5, -1.5}, {-4, -1.5}, {-4, -5}, {0, -7}, {4, -5},
                   {4, -1.5}, {0.5, -1.5}, {0.5, -1}, {5, -1}, {5, -3}, {6, -3}, {6, 1}, {0.5, 1}, {0.5, 1.5},
                   {4, 1.5}, {4, 5}, {0, 7}, {-4, 5}, {-4, 1.5}, {-0.5, 1.5}, {-0.5, 1}, {-6, 1}}),
          {}};
}
inline Polygon saddle_d1() {
  return Polygon({{-5.9, -2.9}, {-5.1, -2.9}, {-5.1, -0.8}, {5.1, -0.8}, {5.1, -2.9}, {5.9, -2.9}, {5.9, -1.6},
                  {4.5, 0.8}, {-4.5, 0.8}, {-5.9, -1.6}});
}
inline Polygon saddle_d2() {
  return Polygon({{-4, -5}, {0, -7}, {4, -5}, {4, -1.5}, {0.05, -1.5}, {0.05, 1.5}, {4, 1.5}, {4, 5}, {0, 7},
                  {-4, 5}, {-4, 1.5}, {-0.05, 1.5}, {-0.05, -1.5}, {-4, -1.5}});
}

// ---------------------------------------------------------------------------
// Independent geometry used by the oracles.

inline double shoelace(const std::vector<Point2>& ring) {
  double s = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2 a = ring[i];
    const Point2 b = ring[(i + 1) % ring.size()];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

/// Crossing-number test; points on the boundary may go either way.
inline bool inside_ring(const std::vector<Point2>& ring, Point2 p) {
  bool in = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const Point2 a = ring[i];
    const Point2 b = ring[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

inline bool in_free(const visopt::Environment& env, Point2 p) {
  if (!inside_ring(env.outer.vertices(), p)) return false;
  for (const Polygon& h : env.holes) {
    if (inside_ring(h.vertices(), p)) return false;
  }
  return true;
}

inline double turn(Point2 a, Point2 b, Point2 c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

inline bool proper_cross(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double d1 = turn(a, b, c);
  const double d2 = turn(a, b, d);
  const double d3 = turn(c, d, a);
  const double d4 = turn(c, d, b);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

/// Line of sight for points in general position: no boundary edge crosses the
/// segment and sampled interior points stay in free space.
inline bool line_of_sight(const visopt::Environment& env, Point2 p, Point2 q) {
  auto edges_of = [&](const std::vector<Point2>& ring) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      if (proper_cross(p, q, ring[i], ring[(i + 1) % ring.size()])) return false;
    }
    return true;
  };
  if (!edges_of(env.outer.vertices())) return false;
  for (const Polygon& h : env.holes) {
    if (!edges_of(h.vertices())) return false;
  }
  for (int k = 1; k < 16; ++k) {
    if (!in_free(env, p + (k / 16.0) * (q - p))) return false;
  }
  return true;
}

struct McEstimate {
  double value;
  double stderr_;
};

/// Area of {p ∈ region(box) : accept(p)} by uniform sampling of `box_ring`'s
/// bounding box; the standard error uses the Laplace-smoothed hit rate so a
/// zero count still carries one sample's worth of uncertainty.
inline McEstimate monte_carlo_area(const std::vector<Point2>& box_ring, const std::function<bool(Point2)>& accept,
                                   std::size_t n, std::uint64_t seed) {
  double lox = box_ring[0].x, hix = lox, loy = box_ring[0].y, hiy = loy;
  for (const Point2& p : box_ring) {
    lox = std::min(lox, p.x);
    hix = std::max(hix, p.x);
    loy = std::min(loy, p.y);
    hiy = std::max(hiy, p.y);
  }
  visopt::Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p{rng.uniform(lox, hix), rng.uniform(loy, hiy)};
    if (inside_ring(box_ring, p) && accept(p)) ++hits;
  }
  const double box = (hix - lox) * (hiy - loy);
  const double ps = (hits + 1.0) / (n + 2.0);
  return {box * hits / n, box * std::sqrt(ps * (1 - ps) / n)};
}

/// Visible area of `target` from x, optionally limited to range R and the
/// cone of full aperture `fov` about `heading`.
inline McEstimate monte_carlo_visible(const visopt::Environment& env, const std::vector<Point2>& target, Point2 x,
                                      std::size_t n, std::uint64_t seed, std::optional<double> range = std::nullopt,
                                      std::optional<double> heading = std::nullopt,
                                      std::optional<double> fov = std::nullopt) {
  return monte_carlo_area(
      target,
      [&](Point2 p) {
        if (!in_free(env, p)) return false;
        if (range && std::hypot(p.x - x.x, p.y - x.y) > *range) return false;
        if (fov && heading) {
          double d = std::atan2(p.y - x.y, p.x - x.x) - *heading;
          d = std::remainder(d, 2.0 * visopt::kPi);
          if (std::abs(d) > 0.5 * *fov) return false;
        }
        return line_of_sight(env, x, p);
      },
      n, seed);
}

inline double central_difference(const std::function<double(Point2)>& f, Point2 x, Point2 nu, double h) {
  return (f(x + h * nu) - f(x - h * nu)) / (2.0 * h);
}

/// Uniform points of free space by rejection from the outer bounding box.
inline std::vector<Point2> random_free_points(const visopt::Environment& env, std::size_t n, std::uint64_t seed,
                                              double clearance = 0.0) {
  const auto box = env.outer.bbox();
  visopt::Rng rng(seed);
  std::vector<Point2> out;
  auto near_boundary = [&](Point2 p) {
    auto check = [&](const std::vector<Point2>& ring) {
      for (std::size_t i = 0; i < ring.size(); ++i) {
        if (visopt::point_segment_distance(p, ring[i], ring[(i + 1) % ring.size()]) < clearance) return true;
      }
      return false;
    };
    if (check(env.outer.vertices())) return true;
    for (const Polygon& h : env.holes) {
      if (check(h.vertices())) return true;
    }
    return false;
  };
  while (out.size() < n) {
    const Point2 p{rng.uniform(box.lo.x, box.hi.x), rng.uniform(box.lo.y, box.hi.y)};
    if (in_free(env, p) && !(clearance > 0 && near_boundary(p))) out.push_back(p);
  }
  return out;
}

}  // namespace fixtures
