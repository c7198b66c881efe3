#include "visopt/critical_structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "visopt/errors.hpp"
#include "visopt/visibility.hpp"

namespace visopt {

std::size_t segment_count_bound(std::size_t n) { return 4 * n + n * (n - 1); }

std::vector<InflectionSegment> inflection_segments(const FreeSpace& fs) {
  std::vector<InflectionSegment> out;
  const double eps = fs.eps_geom();
  auto emit = [&](SegmentKind kind, std::vector<std::size_t> gens, std::size_t origin_id, Point2 dir,
                  std::optional<std::size_t> delta) {
    const Point2 origin = fs.vertex(origin_id);
    const UnitVector2 u = UnitVector2::from(dir);
    const double len = free_run_length(fs, origin, u);
    if (len <= eps) return;
    out.push_back({out.size(), kind, std::move(gens), origin_id, origin, origin + len * u.vec(), delta});
  };

  for (const ReflexVertexInfo& r : fs.reflex()) {
    const std::size_t v = r.id;
    const std::size_t v1 = fs.predecessor(v);
    const std::size_t v2 = fs.successor(v);
    const Point2 pv = fs.vertex(v);
    emit(SegmentKind::TypeI, {v}, v, pv - fs.vertex(v1), v);
    emit(SegmentKind::TypeI, {v}, v, pv - fs.vertex(v2), v);
    emit(SegmentKind::TypeI, {v}, v1, fs.vertex(v1) - pv, v);
    emit(SegmentKind::TypeI, {v}, v2, fs.vertex(v2) - pv, v);
  }

  const auto reflex = fs.reflex();
  for (std::size_t i = 0; i < reflex.size(); ++i) {
    for (std::size_t j = i + 1; j < reflex.size(); ++j) {
      const ReflexVertexInfo& ri = reflex[i];
      const ReflexVertexInfo& rj = reflex[j];
      if (!segment_in_free_space(fs, ri.vertex, rj.vertex)) continue;
      // Ray from `near` away from `far`: `far` is hidden behind `near` on one
      // side, which matters only when `far` can be an anchor there at all.
      auto delta_for = [&](const ReflexVertexInfo& near, const ReflexVertexInfo& far) -> std::optional<std::size_t> {
        if (fs.quadrant(far, near.vertex) == Quadrant::M3) return std::nullopt;
        return far.id;
      };
      emit(SegmentKind::TypeII, {ri.id, rj.id}, ri.id, ri.vertex - rj.vertex, delta_for(ri, rj));
      emit(SegmentKind::TypeII, {rj.id, ri.id}, rj.id, rj.vertex - ri.vertex, delta_for(rj, ri));
    }
  }
  return out;
}

namespace {

struct InputSegment {
  Point2 a;
  Point2 b;
  bool boundary;
  std::optional<std::size_t> segment;
};

class PointPool {
 public:
  explicit PointPool(double tol) : tol_(tol) {}

  std::size_t id(Point2 p) {
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (distance(pts_[i], p) <= tol_) return i;
    }
    pts_.push_back(p);
    return pts_.size() - 1;
  }
  const std::vector<Point2>& points() const { return pts_; }

 private:
  double tol_;
  std::vector<Point2> pts_;
};

Point2 deep_point(const std::vector<Point2>& poly) {
  const std::size_t n = poly.size();
  auto clearance = [&](Point2 p) { return boundary_distance(poly, p); };
  Point2 best = poly[0];
  double best_d = -1.0;
  constexpr int kLevels = 8;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (int a = 1; a < kLevels; ++a) {
      for (int b = 1; a + b < kLevels; ++b) {
        const int c = kLevels - a - b;
        const Point2 p = (static_cast<double>(a) * poly[0] + static_cast<double>(b) * poly[i] +
                          static_cast<double>(c) * poly[i + 1]) /
                         static_cast<double>(kLevels);
        const double d = clearance(p);
        if (d > best_d) {
          best_d = d;
          best = p;
        }
      }
    }
  }
  return best;
}

bool in_convex(const std::vector<Point2>& poly, Point2 x, double tol) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % n];
    if (cross(b - a, x - a) < -tol * norm(b - a)) return false;
  }
  return true;
}

double convex_distance(const std::vector<Point2>& poly, Point2 x) {
  if (in_convex(poly, x, 0.0)) return 0.0;
  return boundary_distance(poly, x);
}

}  // namespace

CriticalStructure build_partition(const FreeSpace& fs, const std::vector<InflectionSegment>& segs) {
  const double eps = fs.eps_geom();
  const double snap = 1e-8 * fs.diameter();

  std::vector<InputSegment> input;
  for (const BoundaryEdge& e : fs.edges()) input.push_back({fs.vertex(e.a), fs.vertex(e.b), true, std::nullopt});
  for (const InflectionSegment& s : segs) input.push_back({s.a, s.b, false, s.id});

  PointPool pool(snap);
  for (const InputSegment& s : input) {
    pool.id(s.a);
    pool.id(s.b);
  }

  struct EdgeRecord {
    bool boundary = false;
    std::set<std::size_t> segments;
  };
  std::map<std::pair<std::size_t, std::size_t>, EdgeRecord> records;

  for (std::size_t i = 0; i < input.size(); ++i) {
    const InputSegment& s = input[i];
    const Point2 d = s.b - s.a;
    const double len2 = norm2(d);
    std::vector<std::pair<double, Point2>> cuts{{0.0, s.a}, {1.0, s.b}};
    for (std::size_t j = 0; j < input.size(); ++j) {
      if (j == i) continue;
      const InputSegment& o = input[j];
      for (Point2 p : {o.a, o.b}) {
        if (point_segment_distance(p, s.a, s.b) <= snap) cuts.push_back({dot(p - s.a, d) / len2, p});
      }
      const double c1 = cross(d, o.a - s.a);
      const double c2 = cross(d, o.b - s.a);
      const Point2 e = o.b - o.a;
      const double c3 = cross(e, s.a - o.a);
      const double c4 = cross(e, s.b - o.a);
      const double l1 = std::sqrt(len2);
      const double l2 = norm(e);
      if (std::abs(c1) > snap * l1 && std::abs(c2) > snap * l1 && std::abs(c3) > snap * l2 &&
          std::abs(c4) > snap * l2 && (c1 < 0) != (c2 < 0) && (c3 < 0) != (c4 < 0)) {
        const Point2 p = lerp(o.a, o.b, c1 / (c1 - c2));
        cuts.push_back({dot(p - s.a, d) / len2, p});
      }
    }
    std::sort(cuts.begin(), cuts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::size_t> chain;
    for (const auto& [t, p] : cuts) {
      const std::size_t id = pool.id(p);
      if (chain.empty() || chain.back() != id) chain.push_back(id);
    }
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      const auto key = std::minmax(chain[k], chain[k + 1]);
      EdgeRecord& rec = records[{key.first, key.second}];
      rec.boundary = rec.boundary || s.boundary;
      if (s.segment) rec.segments.insert(*s.segment);
    }
  }

  const std::vector<Point2>& pts = pool.points();
  struct Half {
    std::size_t from;
    std::size_t to;
    std::size_t edge;
  };
  std::vector<Half> half;
  std::vector<std::pair<std::size_t, std::size_t>> undirected;
  std::vector<const EdgeRecord*> recs;
  for (const auto& [key, rec] : records) {
    const std::size_t e = undirected.size();
    undirected.push_back(key);
    recs.push_back(&rec);
    half.push_back({key.first, key.second, e});
    half.push_back({key.second, key.first, e});
  }

  std::vector<std::vector<std::size_t>> outgoing(pts.size());
  for (std::size_t h = 0; h < half.size(); ++h) outgoing[half[h].from].push_back(h);
  auto angle_of = [&](std::size_t h) {
    const Point2 v = pts[half[h].to] - pts[half[h].from];
    return std::atan2(v.y, v.x);
  };
  std::vector<std::size_t> position(half.size());
  for (auto& out : outgoing) {
    std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) { return angle_of(a) < angle_of(b); });
    for (std::size_t k = 0; k < out.size(); ++k) position[out[k]] = k;
  }
  auto next_of = [&](std::size_t h) {
    const std::size_t twin = h ^ 1u;
    const auto& out = outgoing[half[h].to];
    return out[(position[twin] + out.size() - 1) % out.size()];
  };

  CriticalStructure cs;
  cs.segments = segs;
  cs.eps = eps;
  std::vector<std::ptrdiff_t> face_of(half.size(), -1);
  std::vector<bool> visited(half.size(), false);
  std::size_t negative_cycles = 0;
  for (std::size_t h0 = 0; h0 < half.size(); ++h0) {
    if (visited[h0]) continue;
    std::vector<std::size_t> cycle;
    std::size_t h = h0;
    while (!visited[h]) {
      visited[h] = true;
      cycle.push_back(h);
      h = next_of(h);
    }
    std::vector<Point2> ring;
    for (std::size_t k : cycle) ring.push_back(pts[half[k].from]);
    const double area = signed_area(ring);
    if (area <= 0) {
      ++negative_cycles;
      continue;
    }
    // Drop straight-through vertices so the stored polygon is clean.
    std::vector<Point2> clean;
    for (std::size_t k = 0; k < ring.size(); ++k) {
      const Point2 a = ring[(k + ring.size() - 1) % ring.size()];
      const Point2 b = ring[k];
      const Point2 c = ring[(k + 1) % ring.size()];
      if (orient(a, b, c, snap) != 0) clean.push_back(b);
    }
    if (clean.size() < 3) continue;
    const Point2 sample = deep_point(clean);
    if (point_in_free_space(fs, sample) != PointClass::interior) continue;
    Polygon poly(clean);
    if (!poly.is_convex(snap)) {
      std::set<std::size_t> ids;
      for (std::size_t k : cycle) ids.insert(recs[half[k].edge]->segments.begin(), recs[half[k].edge]->segments.end());
      std::string list;
      for (std::size_t id : ids) list += (list.empty() ? "" : ",") + std::to_string(id);
      throw Error(ErrorKind::ArrangementDegeneracy, "non-convex face bounded by segments [" + list + "]");
    }
    const std::size_t fid = cs.faces.size();
    const AnchorSet as = anchors(fs, sample);
    cs.faces.push_back({fid, std::move(poly), as.ids(), sample});
    for (std::size_t k : cycle) face_of[k] = static_cast<std::ptrdiff_t>(fid);
  }
  if (negative_cycles > 1 + fs.environment().holes.size()) {
    throw Error(ErrorKind::ArrangementDegeneracy, "arrangement is not connected");
  }

  std::map<std::pair<std::size_t, std::size_t>, std::set<std::size_t>> adj;
  for (std::size_t e = 0; e < undirected.size(); ++e) {
    ArrangementEdge ae{pts[undirected[e].first], pts[undirected[e].second], recs[e]->boundary,
                       std::vector<std::size_t>(recs[e]->segments.begin(), recs[e]->segments.end()), std::nullopt,
                       std::nullopt};
    const std::ptrdiff_t fl = face_of[2 * e];
    const std::ptrdiff_t fr = face_of[2 * e + 1];
    if (fl >= 0) ae.left_face = static_cast<std::size_t>(fl);
    if (fr >= 0) ae.right_face = static_cast<std::size_t>(fr);
    if (fl >= 0 && fr >= 0 && fl != fr) {
      const auto a = static_cast<std::size_t>(fl);
      const auto b = static_cast<std::size_t>(fr);
      adj[{std::min(a, b), std::max(a, b)}].insert(ae.segments.begin(), ae.segments.end());
    }
    cs.edges.push_back(std::move(ae));
  }
  for (const auto& [key, ids] : adj) {
    cs.adjacency.push_back({key.first, key.second, std::vector<std::size_t>(ids.begin(), ids.end())});
  }
  return cs;
}

CriticalStructure build_critical_structure(const FreeSpace& fs) {
  return build_partition(fs, inflection_segments(fs));
}

Location locate(const CriticalStructure& cs, Point2 x) {
  std::set<std::size_t> hits;
  for (const ArrangementEdge& e : cs.edges) {
    if (e.segments.empty()) continue;
    if (point_segment_distance(x, e.a, e.b) <= cs.eps) hits.insert(e.segments.begin(), e.segments.end());
  }
  if (!hits.empty()) return SegmentHit{std::vector<std::size_t>(hits.begin(), hits.end())};
  for (const PartitionFace& f : cs.faces) {
    if (in_convex(f.polygon.vertices(), x, cs.eps)) return FaceHit{f.id};
  }
  // Rounding at shared vertices: accept the nearest face within a small band.
  std::optional<std::size_t> best;
  double best_d = 1e3 * cs.eps;
  for (const PartitionFace& f : cs.faces) {
    const double d = convex_distance(f.polygon.vertices(), x);
    if (d <= best_d) {
      best_d = d;
      best = f.id;
    }
  }
  if (best) return FaceHit{*best};
  throw Error(ErrorKind::OutsideFreeSpace, "point is not in any partition face");
}

std::vector<std::size_t> faces_touching(const CriticalStructure& cs, Point2 x, double tol) {
  std::vector<std::size_t> out;
  for (const PartitionFace& f : cs.faces) {
    if (convex_distance(f.polygon.vertices(), x) <= tol) out.push_back(f.id);
  }
  return out;
}

}  // namespace visopt
