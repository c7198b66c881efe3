#include "visopt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "visopt/clipping.hpp"
#include "visopt/errors.hpp"
#include "visopt/random.hpp"

namespace visopt {

namespace {

struct Wedge {
  double lo;
  double hi;
};

/// Area of S(x) ∩ D2 ∩ disk ∩ wedges, by clipping D2 against each fan
/// triangle of the star-shaped visibility polygon.
double clipped_area(const FreeSpace& fs, const Polygon& d2, Point2 x, std::optional<double> range,
                    const std::vector<Wedge>& wedges) {
  const std::vector<Point2> ring = visibility_ring(fs, x);
  const Point2 c = nudge_inward(fs, x);
  const std::vector<Point2> target = d2.with_orientation(Orientation::ccw).vertices();
  double total = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Triangle tri{c, ring[i], ring[(i + 1) % n]};
    if (cross(tri[1] - tri[0], tri[2] - tri[0]) <= 0) continue;
    const std::vector<Point2> piece = clip_convex(target, tri);
    if (piece.size() < 3) continue;
    auto measure = [&](const std::vector<Point2>& p) {
      if (p.size() < 3) return 0.0;
      return range ? disk_intersection_area(p, c, *range) : signed_area(p);
    };
    if (wedges.empty()) {
      total += measure(piece);
      continue;
    }
    for (const Wedge& w : wedges) {
      const Point2 ulo{std::cos(w.lo), std::sin(w.lo)};
      const Point2 uhi{std::cos(w.hi), std::sin(w.hi)};
      std::vector<Point2> cut = clip_halfplane(piece, c, c + ulo);
      cut = clip_halfplane(cut, c + uhi, c);
      total += measure(cut);
    }
  }
  return std::max(0.0, total);
}

}  // namespace

Pose Pose::make(Point2 position, double heading) {
  double h = std::fmod(heading, 2.0 * kPi);
  if (h < 0) h += 2.0 * kPi;
  // Snap to a 1e-12 rad grid so headings differing by whole turns compare equal.
  h = std::round(h * 1e12) / 1e12;
  if (h >= 2.0 * kPi) h = 0.0;
  return {position, h};
}

void validate_metric_config(const FreeSpace& fs, const MetricConfig& cfg) {
  const auto& ring = cfg.d2.vertices();
  if (!is_strictly_simple(ring, fs.eps_geom())) throw Error(ErrorKind::InvalidInput, "d2 is not a simple polygon");
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (!segment_in_free_space(fs, ring[i], ring[(i + 1) % ring.size()])) {
      throw Error(ErrorKind::InvalidInput, "d2 edge " + std::to_string(i) + " leaves free space");
    }
  }
  for (const Polygon& h : fs.environment().holes) {
    if (classify_point(ring, h[0], fs.eps_geom()) == PointClass::interior) {
      throw Error(ErrorKind::InvalidInput, "d2 contains an obstacle");
    }
  }
  if (cfg.range && !(*cfg.range > 0)) throw Error(ErrorKind::InvalidInput, "range must be positive");
  if (cfg.fov && !(*cfg.fov > 0 && *cfg.fov <= 2.0 * kPi)) {
    throw Error(ErrorKind::InvalidInput, "fov aperture must lie in (0, 2π]");
  }
}

double metric_V(const FreeSpace& fs, const MetricConfig& cfg, Point2 x) {
  return clipped_area(fs, cfg.d2, x, std::nullopt, {});
}

double metric_V_area(const FreeSpace& fs, Point2 x) { return visibility_polygon(fs, x).area; }

double metric_V_range(const FreeSpace& fs, const MetricConfig& cfg, Point2 x) {
  if (!cfg.range) throw Error(ErrorKind::DomainError, "metric_V_range needs a sensing range");
  return clipped_area(fs, cfg.d2, x, cfg.range, {});
}

double metric_V_fov(const FreeSpace& fs, const MetricConfig& cfg, const Pose& z) {
  const double phi = cfg.fov.value_or(2.0 * kPi);
  if (!(phi > 0 && phi <= 2.0 * kPi)) throw Error(ErrorKind::DomainError, "fov aperture must lie in (0, 2π]");
  std::vector<Wedge> wedges;
  const double h = Pose::make(z.position, z.heading).heading;
  if (phi < 2.0 * kPi) {
    if (phi <= kPi) {
      wedges.push_back({h - 0.5 * phi, h + 0.5 * phi});
    } else {
      wedges.push_back({h - 0.5 * phi, h});
      wedges.push_back({h, h + 0.5 * phi});
    }
  }
  return clipped_area(fs, cfg.d2, z.position, cfg.range, wedges);
}

double metric_value(const FreeSpace& fs, const MetricConfig& cfg, Point2 x, std::optional<double> heading) {
  if (cfg.fov) {
    if (!heading) throw Error(ErrorKind::DomainError, "fov metric needs a heading");
    return metric_V_fov(fs, cfg, Pose::make(x, *heading));
  }
  if (cfg.range) return metric_V_range(fs, cfg, x);
  return metric_V(fs, cfg, x);
}

double sym_diff_area(std::span<const Point2> a, std::span<const Point2> b) {
  const double inter = intersection_area(a, b);
  return std::max(0.0, std::abs(signed_area(a)) + std::abs(signed_area(b)) - 2.0 * inter);
}

double sym_diff_area(const VisibilityRegion& a, const VisibilityRegion& b) {
  return sym_diff_area(a.to_ring(512), b.to_ring(512));
}

double disk_symdiff_formula(double R, double d) {
  if (!(R > 0) || !(d >= 0) || d > 2.0 * R) {
    throw Error(ErrorKind::DomainError, "disk_symdiff_formula needs R > 0 and 0 <= d <= 2R");
  }
  const double s = std::min(1.0, d / (2.0 * R));
  return 4.0 * R * R * std::asin(s) + d * std::sqrt(std::max(0.0, 4.0 * R * R - d * d));
}

LipschitzEstimate lipschitz_estimate(const FreeSpace& fs, const MetricConfig& cfg, const Polygon& region,
                                     std::size_t n_pairs, std::uint64_t seed, double pair_distance) {
  const auto& ring = region.vertices();
  double clearance = std::numeric_limits<double>::infinity();
  for (const ReflexVertexInfo& r : fs.reflex()) {
    const double d = classify_point(ring, r.vertex, 0.0) == PointClass::exterior ? boundary_distance(ring, r.vertex) : 0.0;
    clearance = std::min(clearance, d);
  }
  LipschitzEstimate out{0.0, 0.0, 0.5 * clearance};
  const double D = fs.diameter();
  out.bound = out.delta > 0 ? static_cast<double>(fs.reflex().size()) * D * D / (4.0 * out.delta)
                            : std::numeric_limits<double>::infinity();
  if (fs.reflex().empty()) out.bound = 0.0;

  const double h = pair_distance > 0 ? pair_distance : 1e-3 * D;
  Rng rng(seed);
  auto unit = [&](Rng& r) { return r.uniform01(); };
  const BBox box = region.bbox();
  auto region_of = [&](Point2 y) {
    return cfg.range ? limited_visibility_region(fs, y, *cfg.range) : visibility_polygon(fs, y);
  };
  std::size_t done = 0;
  std::size_t attempts = 0;
  while (done < n_pairs && attempts < 1000 * (n_pairs + 1)) {
    ++attempts;
    const Point2 y1{box.lo.x + unit(rng) * (box.hi.x - box.lo.x), box.lo.y + unit(rng) * (box.hi.y - box.lo.y)};
    const double ang = 2.0 * kPi * unit(rng);
    const Point2 y2 = y1 + h * Point2{std::cos(ang), std::sin(ang)};
    if (classify_point(ring, y1, 0.0) != PointClass::interior || classify_point(ring, y2, 0.0) != PointClass::interior) {
      continue;
    }
    if (point_in_free_space(fs, y1) != PointClass::interior || point_in_free_space(fs, y2) != PointClass::interior) {
      continue;
    }
    const double sd = sym_diff_area(region_of(y1), region_of(y2));
    out.estimate = std::max(out.estimate, sd / distance(y1, y2));
    ++done;
  }
  return out;
}

}  // namespace visopt
