#include "visopt/clipping.hpp"

#include <algorithm>
#include <cmath>

namespace visopt {

std::vector<Point2> clip_halfplane(std::span<const Point2> subject, Point2 a, Point2 b) {
  std::vector<Point2> out;
  const std::size_t n = subject.size();
  if (n == 0) return out;
  out.reserve(n + 4);
  const Point2 e = b - a;
  auto side = [&](Point2 p) { return cross(e, p - a); };
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 cur = subject[i];
    const Point2 prev = subject[(i + n - 1) % n];
    const double sc = side(cur);
    const double sp = side(prev);
    if (sc >= 0) {
      if (sp < 0) out.push_back(lerp(prev, cur, sp / (sp - sc)));
      out.push_back(cur);
    } else if (sp >= 0) {
      if (sp > 0) out.push_back(lerp(prev, cur, sp / (sp - sc)));
    }
  }
  return out;
}

std::vector<Point2> clip_convex(std::span<const Point2> subject, std::span<const Point2> convex_ccw) {
  std::vector<Point2> cur(subject.begin(), subject.end());
  const std::size_t m = convex_ccw.size();
  for (std::size_t i = 0; i < m && !cur.empty(); ++i) {
    cur = clip_halfplane(cur, convex_ccw[i], convex_ccw[(i + 1) % m]);
  }
  return cur;
}

namespace {

bool in_triangle(Point2 p, Point2 a, Point2 b, Point2 c) {
  const double d1 = cross(b - a, p - a);
  const double d2 = cross(c - b, p - b);
  const double d3 = cross(a - c, p - c);
  return d1 >= 0 && d2 >= 0 && d3 >= 0;
}

}  // namespace

std::vector<Triangle> triangulate(std::span<const Point2> ring) {
  std::vector<Point2> pts(ring.begin(), ring.end());
  if (signed_area(pts) < 0) std::reverse(pts.begin(), pts.end());
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<Triangle> tris;
  while (idx.size() > 3) {
    const std::size_t n = idx.size();
    bool clipped = false;
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 a = pts[idx[(i + n - 1) % n]];
      const Point2 b = pts[idx[i]];
      const Point2 c = pts[idx[(i + 1) % n]];
      const double turn = cross(b - a, c - b);
      if (turn <= 0) continue;
      bool blocked = false;
      for (std::size_t j = 0; j < n && !blocked; ++j) {
        if (j == i || j == (i + 1) % n || j == (i + n - 1) % n) continue;
        const Point2 p = pts[idx[j]];
        if (p == a || p == b || p == c) continue;
        blocked = in_triangle(p, a, b, c);
      }
      if (blocked) continue;
      tris.push_back({a, b, c});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) {
      // Rounding left no strictly convex ear: drop the flattest vertex.
      std::size_t worst = 0;
      double worst_turn = INFINITY;
      for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = pts[idx[(i + n - 1) % n]];
        const Point2 b = pts[idx[i]];
        const Point2 c = pts[idx[(i + 1) % n]];
        const double t = std::abs(cross(b - a, c - b));
        if (t < worst_turn) {
          worst_turn = t;
          worst = i;
        }
      }
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(worst));
    }
  }
  if (idx.size() == 3) {
    const Triangle t{pts[idx[0]], pts[idx[1]], pts[idx[2]]};
    if (cross(t[1] - t[0], t[2] - t[0]) > 0) tris.push_back(t);
  }
  return tris;
}

double intersection_area(std::span<const Point2> a, std::span<const Point2> b) {
  std::vector<Point2> bb(b.begin(), b.end());
  if (signed_area(bb) < 0) std::reverse(bb.begin(), bb.end());
  double total = 0.0;
  for (const Triangle& t : triangulate(a)) {
    const auto piece = clip_convex(bb, t);
    if (piece.size() >= 3) total += signed_area(piece);
  }
  return std::max(0.0, total);
}

namespace {

/// Signed area of triangle (0, p, q) ∩ disk(0, r).
double wedge_disk_area(Point2 p, Point2 q, double r) {
  const Point2 d = q - p;
  const double a = norm2(d);
  if (a == 0.0) return 0.0;
  const double b = dot(p, d);
  const double c = norm2(p) - r * r;
  double ts[4] = {0.0, 0.0, 0.0, 0.0};
  int nt = 0;
  ts[nt++] = 0.0;
  const double disc = b * b - a * c;
  if (disc > 0) {
    const double sq = std::sqrt(disc);
    const double t1 = (-b - sq) / a;
    const double t2 = (-b + sq) / a;
    if (t1 > 0 && t1 < 1) ts[nt++] = t1;
    if (t2 > 0 && t2 < 1) ts[nt++] = t2;
  }
  ts[nt++] = 1.0;
  double area = 0.0;
  for (int i = 0; i + 1 < nt; ++i) {
    const Point2 u = p + ts[i] * d;
    const Point2 v = p + ts[i + 1] * d;
    const Point2 m = p + 0.5 * (ts[i] + ts[i + 1]) * d;
    if (norm2(m) <= r * r) {
      area += 0.5 * cross(u, v);
    } else {
      area += 0.5 * r * r * std::atan2(cross(u, v), dot(u, v));
    }
  }
  return area;
}

}  // namespace

double disk_intersection_area(std::span<const Point2> ring, Point2 center, double radius) {
  double s = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    s += wedge_disk_area(ring[i] - center, ring[(i + 1) % n] - center, radius);
  }
  return s;
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i - 1] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

std::vector<Point2> regular_polygon(Point2 center, double radius, std::size_t n) {
  std::vector<Point2> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    pts.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
  return pts;
}

}  // namespace visopt
