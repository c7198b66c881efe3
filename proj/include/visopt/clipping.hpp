#pragma once

#include <array>
#include <span>
#include <vector>

#include "visopt/geometry.hpp"

namespace visopt {

using Triangle = std::array<Point2, 3>;

/// Sutherland–Hodgman clip of an arbitrary ring against a convex ccw ring.
/// The output may contain degenerate bridge edges; its signed area is exact.
std::vector<Point2> clip_convex(std::span<const Point2> subject, std::span<const Point2> convex_ccw);

/// Clip against the closed half-plane to the left of the directed line a→b.
std::vector<Point2> clip_halfplane(std::span<const Point2> subject, Point2 a, Point2 b);

/// Ear-clipping triangulation of a simple ring (any orientation); triangles ccw.
std::vector<Triangle> triangulate(std::span<const Point2> ring);

/// Area of the intersection of two simple polygons.
double intersection_area(std::span<const Point2> a, std::span<const Point2> b);

/// Signed area of ring ∩ disk(center, radius), exact up to rounding.
double disk_intersection_area(std::span<const Point2> ring, Point2 center, double radius);

/// Andrew's monotone chain; returns the hull ccw without collinear points.
std::vector<Point2> convex_hull(std::vector<Point2> pts);

std::vector<Point2> regular_polygon(Point2 center, double radius, std::size_t n);

}  // namespace visopt
