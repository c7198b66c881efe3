#include "visopt/gradients.hpp"

#include <algorithm>
#include <cmath>

#include "visopt/clipping.hpp"
#include "visopt/errors.hpp"

namespace visopt {

namespace {

struct AnchorTerm {
  std::size_t id;
  double sign;      ///< +1 positive orientation, −1 negative
  double weight;    ///< r² / (2‖x − v‖)
  Point2 a_hat;     ///< unit(x − v)
  ProjectedRay ray;
};

/// Per-anchor data at the evaluation point; anchors whose quadrant test fails
/// there contribute nothing and are dropped.
std::vector<AnchorTerm> anchor_terms(const FreeSpace& fs, const std::vector<std::size_t>& ids, Point2 x) {
  std::vector<AnchorTerm> terms;
  for (std::size_t id : ids) {
    const auto idx = fs.reflex_index(id);
    if (!idx) continue;
    const ReflexVertexInfo& r = fs.reflex()[*idx];
    const Quadrant q = fs.quadrant(r, x);
    if (q != Quadrant::M2 && q != Quadrant::M4) continue;
    const Point2 w = x - r.vertex;
    const double dist = norm(w);
    AnchorTerm t{id, q == Quadrant::M2 ? 1.0 : -1.0, 0.0, w / dist, project_ray(fs, r.vertex, x)};
    t.weight = t.ray.is_infinite() ? t.ray.length : t.ray.length * t.ray.length / (2.0 * dist);
    terms.push_back(t);
  }
  return terms;
}

struct Selection {
  std::vector<std::size_t> ids;
  Point2 eval;
  bool on_segment = false;
  bool along_segment = false;
};

Selection select_anchors(const FreeSpace& fs, const CriticalStructure& cs, Point2 x, UnitVector2 nu) {
  require_reflex_clearance(fs, x);
  const double h0 = 1e-7 * fs.diameter();
  if (!direction_feasible(fs, x, nu, h0)) throw Error(ErrorKind::InfeasibleDirection, "direction leaves free space");
  Selection sel;
  const Location at = locate(cs, x);
  if (const auto* f = std::get_if<FaceHit>(&at)) {
    sel.ids = cs.faces[f->face].anchor_set;
    sel.eval = x;
    return sel;
  }
  sel.on_segment = true;
  sel.eval = x + h0 * nu.vec();
  const Location probe = locate(cs, sel.eval);
  if (const auto* f = std::get_if<FaceHit>(&probe)) {
    sel.ids = cs.faces[f->face].anchor_set;
  } else {
    // ν runs along the segment: anchors shared by the points just ahead.
    sel.along_segment = true;
    sel.ids = anchors(fs, sel.eval).ids();
  }
  return sel;
}

double signed_term(const AnchorTerm& t, UnitVector2 nu) { return -t.sign * t.weight * cross(t.a_hat, nu.vec()); }

void check_finite(const AnchorTerm& t, UnitVector2 nu) {
  if (t.ray.is_infinite() && std::abs(cross(t.a_hat, nu.vec())) > 1e-12) {
    throw Error(ErrorKind::InfiniteRay, "anchor " + std::to_string(t.id) + " has an unbounded projected ray");
  }
}

DirectionalDerivative evaluate(const FreeSpace& fs, const CriticalStructure& cs, const MetricConfig* cfg, Point2 x,
                               UnitVector2 nu) {
  const Selection sel = select_anchors(fs, cs, x, nu);
  DirectionalDerivative dd;
  dd.on_segment = sel.on_segment;
  dd.along_segment = sel.along_segment;
  dd.anchors_used = sel.ids;
  for (const AnchorTerm& t : anchor_terms(fs, sel.ids, sel.eval)) {
    check_finite(t, nu);
    double c = t.ray.is_infinite() ? 0.0 : signed_term(t, nu);
    if (cfg && c != 0.0) c *= c_fraction(fs, *cfg, t.ray, sel.eval, nu);
    dd.per_anchor.push_back({t.id, c});
    dd.value += c;
  }
  return dd;
}

}  // namespace

void require_reflex_clearance(const FreeSpace& fs, Point2 x) {
  for (const ReflexVertexInfo& r : fs.reflex()) {
    if (distance(r.vertex, x) < fs.eps_rv()) {
      throw Error(ErrorKind::TooCloseToReflexVertex, "point within eps_rv of reflex vertex " + std::to_string(r.id));
    }
  }
}

DirectionalDerivative dd_area(const FreeSpace& fs, const CriticalStructure& cs, Point2 x, UnitVector2 nu) {
  return evaluate(fs, cs, nullptr, x, nu);
}

DirectionalDerivative dd_metric(const FreeSpace& fs, const CriticalStructure& cs, const MetricConfig& cfg, Point2 x,
                                UnitVector2 nu) {
  return evaluate(fs, cs, &cfg, x, nu);
}

double c_fraction(const FreeSpace& /*fs*/, const MetricConfig& cfg, const ProjectedRay& anchor, Point2 /*x*/,
                  UnitVector2 /*nu*/) {
  if (anchor.is_infinite() || anchor.length <= 0) return 0.0;
  const auto& ring = cfg.d2.vertices();
  const Point2 o = anchor.origin;
  const Point2 d = anchor.direction.vec();
  const double r = anchor.length;
  std::vector<double> ts{0.0, r};
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = ring[i];
    const Point2 b = ring[(i + 1) % n];
    const double ca = cross(d, a - o);
    const double cb = cross(d, b - o);
    if (ca == 0.0) ts.push_back(dot(a - o, d));
    if (cb == 0.0) ts.push_back(dot(b - o, d));
    if ((ca < 0 && cb > 0) || (ca > 0 && cb < 0)) ts.push_back(dot(lerp(a, b, ca / (ca - cb)) - o, d));
  }
  std::vector<double> cuts;
  for (double t : ts) {
    if (t >= 0.0 && t <= r) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double s0 = cuts[k];
    const double s1 = cuts[k + 1];
    if (s1 <= s0) continue;
    if (classify_point(ring, o + (0.5 * (s0 + s1)) * d, 0.0) != PointClass::exterior) {
      integral += 0.5 * (s1 * s1 - s0 * s0);
    }
  }
  return std::clamp(integral / (0.5 * r * r), 0.0, 1.0);
}

double c_fraction_triangle(const FreeSpace& fs, const MetricConfig& cfg, Point2 anchor_vertex, Point2 x, UnitVector2 nu,
                           double delta) {
  const ProjectedRay r0 = project_ray(fs, anchor_vertex, x);
  const ProjectedRay r1 = project_ray(fs, anchor_vertex, x + delta * nu.vec());
  if (r0.is_infinite() || r1.is_infinite()) return 0.0;
  const std::vector<Point2> tri{anchor_vertex, r0.endpoint(), r1.endpoint()};
  const double area = std::abs(signed_area(tri));
  if (area == 0.0) return 0.0;
  return intersection_area(tri, cfg.d2.vertices()) / area;
}

double mu_dd(const FreeSpace& fs, const CriticalStructure& cs, Point2 x, UnitVector2 nu) {
  const Selection sel = select_anchors(fs, cs, x, nu);
  double total = 0.0;
  for (const AnchorTerm& t : anchor_terms(fs, sel.ids, sel.eval)) {
    check_finite(t, nu);
    if (!t.ray.is_infinite()) total += t.weight * std::abs(cross(t.a_hat, nu.vec()));
  }
  return total;
}

std::optional<UnitVector2> separating_direction(const std::vector<Point2>& generators) {
  if (generators.empty()) return std::nullopt;
  std::vector<double> angles;
  for (const Point2& g : generators) {
    if (norm(g) <= 1e-300) return std::nullopt;
    angles.push_back(std::atan2(g.y, g.x));
  }
  std::sort(angles.begin(), angles.end());
  double best_gap = -1.0;
  std::size_t best = 0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double next = i + 1 < angles.size() ? angles[i + 1] : angles[0] + 2.0 * kPi;
    const double gap = next - angles[i];
    if (gap > best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  if (best_gap <= kPi + 1e-12) return std::nullopt;
  const double start = best + 1 < angles.size() ? angles[best + 1] : angles[0];
  return UnitVector2::from_angle(start + 0.5 * (2.0 * kPi - best_gap));
}

std::optional<UnitVector2> GeneralizedGradient::separating_direction() const {
  return visopt::separating_direction(generators);
}

GeneralizedGradient generalized_gradient(const FreeSpace& fs, const CriticalStructure& cs, const MetricConfig* cfg,
                                         Point2 x, GradientObjective objective) {
  require_reflex_clearance(fs, x);
  if (objective == GradientObjective::metric && cfg == nullptr) {
    throw Error(ErrorKind::DomainError, "metric gradient needs a metric config");
  }
  const double shift = 1e-7 * fs.diameter();
  GeneralizedGradient gg;
  std::vector<std::size_t> faces;
  const Location at = locate(cs, x);
  if (const auto* f = std::get_if<FaceHit>(&at)) {
    faces.push_back(f->face);
  } else {
    faces = faces_touching(cs, x, 10.0 * cs.eps);
  }
  for (std::size_t fid : faces) {
    const PartitionFace& face = cs.faces[fid];
    Point2 xf = x;
    if (faces.size() > 1 && distance(face.sample, x) > shift) xf = x + shift * UnitVector2::from(face.sample - x).vec();
    Point2 g{0.0, 0.0};
    for (const AnchorTerm& t : anchor_terms(fs, face.anchor_set, xf)) {
      if (t.ray.is_infinite()) continue;
      double scale = -t.sign * t.weight;
      if (objective == GradientObjective::metric) {
        scale *= c_fraction(fs, *cfg, t.ray, xf, UnitVector2::from({1.0, 0.0}));
      }
      g = g + scale * perp(t.a_hat);
    }
    gg.generators.push_back(g);
  }
  gg.hull = convex_hull(gg.generators);
  return gg;
}

std::vector<GradientSample> gradient_field(const FreeSpace& fs, const CriticalStructure& cs, const MetricConfig& cfg,
                                           const Polygon& region, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "grid resolution must be at least 2");
  const double D = fs.diameter();
  const double h = 1e-5 * D;
  const double seg_tol = 1e-3 * D;
  // Absolute floor: rel_err ≤ 1e-3 exactly when |analytic − fd| ≤ max(1e-4·D², 1e-3·|fd|).
  const double floor = 0.1 * D * D;
  const BBox box = region.bbox();
  const auto fm = [&](Point2 p) { return metric_V(fs, cfg, p); };
  const UnitVector2 e1 = UnitVector2::from({1.0, 0.0});
  const UnitVector2 e2 = UnitVector2::from({0.0, 1.0});
  std::vector<GradientSample> out;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 x{box.lo.x + (i + 0.5) / n * (box.hi.x - box.lo.x), box.lo.y + (j + 0.5) / n * (box.hi.y - box.lo.y)};
      if (classify_point(region.vertices(), x, 0.0) != PointClass::interior) continue;
      if (point_in_free_space(fs, x) != PointClass::interior) continue;
      GradientSample s{x, SampleStatus::smooth, {}, {}, 0.0};
      const bool near_reflex = std::any_of(fs.reflex().begin(), fs.reflex().end(),
                                           [&](const ReflexVertexInfo& r) { return distance(r.vertex, x) < fs.eps_rv(); });
      if (near_reflex) {
        s.status = SampleStatus::near_reflex;
      } else if (std::any_of(cs.segments.begin(), cs.segments.end(),
                             [&](const InflectionSegment& g) { return point_segment_distance(x, g.a, g.b) < seg_tol; })) {
        s.status = SampleStatus::on_segment;
      } else if (boundary_distance(fs, x) < 10.0 * h) {
        s.status = SampleStatus::near_boundary;
      }
      if (s.status == SampleStatus::smooth) {
        s.analytic = {dd_metric(fs, cs, cfg, x, e1).value, dd_metric(fs, cs, cfg, x, e2).value};
        s.fd = {fd_oracle(fm, x, e1, h, FdScheme::central), fd_oracle(fm, x, e2, h, FdScheme::central)};
        s.rel_err = std::max(std::abs(s.analytic.x - s.fd.x) / std::max(std::abs(s.fd.x), floor),
                             std::abs(s.analytic.y - s.fd.y) / std::max(std::abs(s.fd.y), floor));
      }
      out.push_back(s);
    }
  }
  return out;
}

double fd_oracle(const std::function<double(Point2)>& f, Point2 x, UnitVector2 nu, double h, FdScheme scheme) {
  if (scheme == FdScheme::central) return (f(x + h * nu.vec()) - f(x - h * nu.vec())) / (2.0 * h);
  return (f(x + h * nu.vec()) - f(x)) / h;
}

}  // namespace visopt
