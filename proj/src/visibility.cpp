#include "visopt/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "visopt/errors.hpp"

namespace visopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_observer(const FreeSpace& fs, Point2 x) {
  if (point_in_free_space(fs, x) == PointClass::exterior) {
    throw Error(ErrorKind::ObserverOutsideFreeSpace,
                "observer (" + std::to_string(x.x) + ", " + std::to_string(x.y) + ") is outside free space");
  }
}

int side_of(Point2 d, Point2 rel, double eps) {
  const double c = cross(d, rel);
  if (std::abs(c) <= eps) return 0;
  return c > 0 ? 1 : -1;
}

/// Distances to the first boundary hit just clockwise (minus) and just
/// counter-clockwise (plus) of the ray x + t·d.
std::pair<double, double> limit_hits(const FreeSpace& fs, Point2 x, Point2 d) {
  const double eps = fs.eps_geom();
  double tm = kInf;
  double tp = kInf;
  for (const BoundaryEdge& e : fs.edges()) {
    const Point2 a = fs.vertex(e.a);
    const Point2 b = fs.vertex(e.b);
    const int sa = side_of(d, a - x, eps);
    const int sb = side_of(d, b - x, eps);
    if (sa == 0 && sb == 0) continue;
    if (sa == 0 || sb == 0) {
      const Point2 on = sa == 0 ? a : b;
      const int other = sa == 0 ? sb : sa;
      const double t = dot(on - x, d);
      if (t <= eps) continue;
      if (other < 0) tm = std::min(tm, t);
      else tp = std::min(tp, t);
      continue;
    }
    if (sa == sb) continue;
    const double ca = cross(d, a - x);
    const double cb = cross(d, b - x);
    const Point2 p = lerp(a, b, ca / (ca - cb));
    const double t = dot(p - x, d);
    if (t <= eps) continue;
    tm = std::min(tm, t);
    tp = std::min(tp, t);
  }
  return {tm, tp};
}

std::vector<Point2> simplify_ring(std::vector<Point2> ring, double eps) {
  bool changed = true;
  while (changed && ring.size() >= 3) {
    changed = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 a = ring[(i + n - 1) % n];
      const Point2 b = ring[i];
      const Point2 c = ring[(i + 1) % n];
      const bool dup = distance(a, b) <= eps;
      const bool straight = !dup && distance(a, c) > eps && point_segment_distance(b, a, c) <= eps;
      if (dup || straight) {
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return ring;
}

}  // namespace

Point2 ArcEdge::start() const { return center + radius * Point2{std::cos(theta_start), std::sin(theta_start)}; }
Point2 ArcEdge::end() const { return center + radius * Point2{std::cos(theta_end), std::sin(theta_end)}; }

bool VisibilityRegion::is_polygon() const {
  return std::all_of(boundary.begin(), boundary.end(),
                     [](const RegionEdge& e) { return std::holds_alternative<LinearEdge>(e); });
}

std::vector<Point2> VisibilityRegion::to_ring(std::size_t arc_segments) const {
  std::vector<Point2> ring;
  for (const RegionEdge& e : boundary) {
    if (const auto* l = std::get_if<LinearEdge>(&e)) {
      ring.push_back(l->a);
    } else {
      const auto& arc = std::get<ArcEdge>(e);
      const double span = arc.theta_end - arc.theta_start;
      const auto n = static_cast<std::size_t>(
          std::max(1.0, std::ceil(static_cast<double>(arc_segments) * span / (2.0 * kPi))));
      for (std::size_t k = 0; k < n; ++k) {
        const double t = arc.theta_start + span * static_cast<double>(k) / static_cast<double>(n);
        ring.push_back(arc.center + arc.radius * Point2{std::cos(t), std::sin(t)});
      }
    }
  }
  return ring;
}

double region_area(const std::vector<RegionEdge>& boundary) {
  double s = 0.0;
  for (const RegionEdge& e : boundary) {
    if (const auto* l = std::get_if<LinearEdge>(&e)) {
      s += cross(l->a, l->b);
    } else {
      const auto& a = std::get<ArcEdge>(e);
      const double r = a.radius;
      s += r * r * (a.theta_end - a.theta_start) +
           r * a.center.x * (std::sin(a.theta_end) - std::sin(a.theta_start)) -
           r * a.center.y * (std::cos(a.theta_end) - std::cos(a.theta_start));
    }
  }
  return 0.5 * s;
}

std::vector<std::size_t> AnchorSet::ids() const {
  std::vector<std::size_t> out;
  out.reserve(anchors.size());
  for (const Anchor& a : anchors) out.push_back(a.vertex);
  return out;
}

const Anchor* AnchorSet::find(std::size_t vertex) const {
  for (const Anchor& a : anchors) {
    if (a.vertex == vertex) return &a;
  }
  return nullptr;
}

std::vector<Point2> visibility_ring(const FreeSpace& fs, Point2 x) {
  require_observer(fs, x);
  const Point2 xe = nudge_inward(fs, x);
  const double eps = fs.eps_geom();

  struct Dir {
    Point2 w;
    double angle;
  };
  std::vector<Dir> dirs;
  for (const Point2& v : fs.vertices()) {
    const Point2 w = v - xe;
    if (norm(w) <= eps) continue;
    dirs.push_back({w, std::atan2(w.y, w.x)});
  }
  std::sort(dirs.begin(), dirs.end(), [](const Dir& a, const Dir& b) { return a.angle < b.angle; });

  // Collinear vertices share one critical direction.
  std::vector<Point2> groups;
  for (const Dir& d : dirs) {
    if (!groups.empty()) {
      const Point2 g = groups.back() / norm(groups.back());
      if (std::abs(cross(g, d.w)) <= eps && dot(g, d.w) > 0) continue;
    }
    groups.push_back(d.w);
  }
  if (groups.size() >= 2) {
    const Point2 g = groups.front() / norm(groups.front());
    if (std::abs(cross(g, groups.back())) <= eps && dot(g, groups.back()) > 0) groups.pop_back();
  }

  std::vector<Point2> ring;
  ring.reserve(2 * groups.size());
  for (const Point2& w : groups) {
    const Point2 d = w / norm(w);
    const auto [tm, tp] = limit_hits(fs, xe, d);
    if (!std::isfinite(tm) || !std::isfinite(tp)) continue;
    ring.push_back(xe + tm * d);
    ring.push_back(xe + tp * d);
  }
  return simplify_ring(std::move(ring), eps);
}

VisibilityRegion visibility_polygon(const FreeSpace& fs, Point2 x) {
  const std::vector<Point2> ring = visibility_ring(fs, x);
  VisibilityRegion region{x, {}, 0.0};
  const std::size_t n = ring.size();
  region.boundary.reserve(n);
  for (std::size_t i = 0; i < n; ++i) region.boundary.push_back(LinearEdge{ring[i], ring[(i + 1) % n]});
  region.area = std::max(0.0, signed_area(ring));
  return region;
}

std::vector<std::size_t> visible_vertices(const FreeSpace& fs, Point2 x) {
  require_observer(fs, x);
  std::vector<std::size_t> out;
  for (std::size_t id = 0; id < fs.vertices().size(); ++id) {
    if (segment_in_free_space(fs, x, fs.vertex(id))) out.push_back(id);
  }
  return out;
}

AnchorSet anchors(const FreeSpace& fs, Point2 x) {
  require_observer(fs, x);
  AnchorSet set;
  for (const ReflexVertexInfo& r : fs.reflex()) {
    if (distance(r.vertex, x) <= fs.eps_geom()) continue;
    const Quadrant q = fs.quadrant(r, x);
    if (q != Quadrant::M2 && q != Quadrant::M4) continue;
    if (!segment_in_free_space(fs, x, r.vertex)) continue;
    const auto orientation = q == Quadrant::M2 ? AnchorOrientation::positive : AnchorOrientation::negative;
    set.anchors.push_back({r.id, orientation, project_ray(fs, r.vertex, x)});
  }
  return set;
}

std::vector<std::size_t> anchors_by_definition(const FreeSpace& fs, Point2 x) {
  require_observer(fs, x);
  std::vector<std::size_t> out;
  for (const ReflexVertexInfo& r : fs.reflex()) {
    if (distance(r.vertex, x) <= fs.eps_geom()) continue;
    if (!segment_in_free_space(fs, x, r.vertex)) continue;
    if (free_run_length(fs, r.vertex, UnitVector2::from(r.vertex - x)) > fs.eps_geom()) out.push_back(r.id);
  }
  return out;
}

std::optional<AnchorOrientation> orientation_by_definition(const FreeSpace& fs, Point2 x, std::size_t vertex) {
  const Point2 v = fs.vertex(vertex);
  const Point2 d = UnitVector2::from(v - x).vec();
  const double delta = 1e-4 * fs.diameter();
  auto side_visible = [&](double sign) {
    for (double a : {0.25 * kPi, 0.5 * kPi, 0.75 * kPi}) {
      if (!segment_in_free_space(fs, x, v + delta * rotate(d, sign * a))) return false;
    }
    return true;
  };
  const bool ccw = side_visible(1.0);
  const bool cw = side_visible(-1.0);
  if (ccw && !cw) return AnchorOrientation::positive;
  if (cw && !ccw) return AnchorOrientation::negative;
  return std::nullopt;
}

VisibilityRegion limited_visibility_region(const FreeSpace& fs, Point2 x, double radius,
                                           std::optional<double> heading, std::optional<double> aperture) {
  if (!(radius > 0)) throw Error(ErrorKind::DomainError, "sensing range must be positive");
  const std::vector<Point2> ring = visibility_ring(fs, x);
  const Point2 c = nudge_inward(fs, x);
  const bool windowed = aperture.has_value() && *aperture < 2.0 * kPi;
  if (windowed && !heading.has_value()) throw Error(ErrorKind::DomainError, "a field of view needs a heading");
  const double lo = windowed ? *heading - 0.5 * *aperture : 0.0;
  const double hi = windowed ? *heading + 0.5 * *aperture : 0.0;

  struct Piece {
    double key;  // start angle relative to the window start
    Point2 u;
    Point2 w;
  };
  std::vector<Piece> pieces;
  const std::size_t n = ring.size();
  auto point_at = [&](Point2 p, Point2 q, double ang) {
    const Point2 u{std::cos(ang), std::sin(ang)};
    const double s = cross(p - c, q - p) / cross(u, q - p);
    return c + s * u;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = ring[i];
    const Point2 q = ring[(i + 1) % n];
    double a0 = std::atan2(p.y - c.y, p.x - c.x);
    double a1 = std::atan2(q.y - c.y, q.x - c.x);
    while (a1 <= a0) a1 += 2.0 * kPi;
    if (!windowed) {
      pieces.push_back({static_cast<double>(i), p, q});
      continue;
    }
    for (int shift = -2; shift <= 2; ++shift) {
      const double s0 = a0 + 2.0 * kPi * shift;
      const double s1 = a1 + 2.0 * kPi * shift;
      const double b0 = std::max(s0, lo);
      const double b1 = std::min(s1, hi);
      if (b1 <= b0) continue;
      const Point2 u = b0 == s0 ? p : point_at(p, q, b0);
      const Point2 w = b1 == s1 ? q : point_at(p, q, b1);
      pieces.push_back({b0 - lo, u, w});
    }
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.key < b.key; });

  std::vector<RegionEdge> edges;
  auto push_arc = [&](Point2 from, Point2 to) {
    const double t0 = std::atan2(from.y - c.y, from.x - c.x);
    double t1 = std::atan2(to.y - c.y, to.x - c.x);
    while (t1 < t0) t1 += 2.0 * kPi;
    if (!edges.empty()) {
      if (auto* prev = std::get_if<ArcEdge>(&edges.back())) {
        prev->theta_end += t1 - t0;
        return;
      }
    }
    edges.push_back(ArcEdge{c, radius, t0, t1});
  };
  auto push_piece = [&](Point2 u, Point2 w) {
    const Point2 pu = u - c;
    const Point2 d = w - u;
    const double A = norm2(d);
    if (A == 0.0) return;
    const double B = dot(pu, d);
    const double C = norm2(pu) - radius * radius;
    std::vector<double> ts{0.0};
    const double disc = B * B - A * C;
    if (disc > 0) {
      const double sq = std::sqrt(disc);
      for (double t : {(-B - sq) / A, (-B + sq) / A}) {
        if (t > 0 && t < 1) ts.push_back(t);
      }
    }
    ts.push_back(1.0);
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      const Point2 s = u + ts[k] * d;
      const Point2 e = u + ts[k + 1] * d;
      const Point2 m = u + 0.5 * (ts[k] + ts[k + 1]) * d;
      if (norm2(m - c) <= radius * radius) {
        edges.push_back(LinearEdge{s, e});
      } else {
        push_arc(s, e);
      }
    }
  };
  auto clamp_to_disk = [&](Point2 p) {
    const double r = distance(p, c);
    return r <= radius ? p : c + (radius / r) * (p - c);
  };

  if (windowed && !pieces.empty()) {
    edges.push_back(LinearEdge{c, clamp_to_disk(pieces.front().u)});
  }
  for (const Piece& pc : pieces) push_piece(pc.u, pc.w);
  if (windowed && !pieces.empty()) {
    edges.push_back(LinearEdge{clamp_to_disk(pieces.back().w), c});
  } else if (edges.size() >= 2) {
    // The ring closes on itself: fold a trailing arc into a leading one.
    auto* first = std::get_if<ArcEdge>(&edges.front());
    auto* last = std::get_if<ArcEdge>(&edges.back());
    if (first && last) {
      first->theta_start -= last->theta_end - last->theta_start;
      edges.pop_back();
    }
  }
  VisibilityRegion region{x, std::move(edges), 0.0};
  region.area = std::max(0.0, region_area(region.boundary));
  return region;
}

}  // namespace visopt
