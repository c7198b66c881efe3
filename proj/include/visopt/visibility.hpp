#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "visopt/free_space.hpp"

namespace visopt {

struct LinearEdge {
  Point2 a;
  Point2 b;
};

/// Counter-clockwise arc from theta_start to theta_end (theta_end > theta_start).
struct ArcEdge {
  Point2 center;
  double radius;
  double theta_start;
  double theta_end;

  Point2 start() const;
  Point2 end() const;
};

using RegionEdge = std::variant<LinearEdge, ArcEdge>;

/// Star-shaped region seen from an observer. Without a range limit every
/// edge is linear and the region is a polygon.
struct VisibilityRegion {
  Point2 observer;
  std::vector<RegionEdge> boundary;
  double area = 0.0;

  bool is_polygon() const;
  /// Boundary vertices; arcs are sampled at `arc_segments` per full turn.
  std::vector<Point2> to_ring(std::size_t arc_segments = 512) const;
};

double region_area(const std::vector<RegionEdge>& boundary);

enum class AnchorOrientation { positive, negative };

struct Anchor {
  std::size_t vertex;  ///< flattened vertex id
  AnchorOrientation orientation;
  ProjectedRay ray;
};

struct AnchorSet {
  std::vector<Anchor> anchors;  ///< sorted by vertex id

  std::vector<std::size_t> ids() const;
  const Anchor* find(std::size_t vertex) const;
};

VisibilityRegion visibility_polygon(const FreeSpace& fs, Point2 x);

/// Ordered vertex ring of visibility_polygon(fs, x).
std::vector<Point2> visibility_ring(const FreeSpace& fs, Point2 x);

/// Anchors via the quadrant characterization.
AnchorSet anchors(const FreeSpace& fs, Point2 x);

/// Reflex vertices satisfying the definition directly: visible, and the
/// away-pointing projected ray has a nonempty free run.
std::vector<std::size_t> anchors_by_definition(const FreeSpace& fs, Point2 x);

/// Orientation read off from which side of the projected ray is visible
/// near the anchor; nullopt when neither side is cleanly visible.
std::optional<AnchorOrientation> orientation_by_definition(const FreeSpace& fs, Point2 x, std::size_t vertex);

std::vector<std::size_t> visible_vertices(const FreeSpace& fs, Point2 x);

/// Region limited to the disk of radius R about x and, when an aperture is
/// given, to the cone |angle − heading| ≤ aperture/2.
VisibilityRegion limited_visibility_region(const FreeSpace& fs, Point2 x, double radius,
                                           std::optional<double> heading = std::nullopt,
                                           std::optional<double> aperture = std::nullopt);

}  // namespace visopt
