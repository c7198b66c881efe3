#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "visopt/geometry.hpp"

namespace visopt {

struct Environment {
  Polygon outer;
  std::vector<Polygon> holes;
};

/// Where a flattened vertex came from: ring 0 is the outer boundary, ring i ≥ 1
/// is hole i−1; `index` is the position in the *input* ring.
struct VertexRef {
  std::size_t ring;
  std::size_t index;
};

struct ReflexVertexInfo {
  std::size_t id;  ///< flattened vertex id
  Point2 vertex;
  UnitVector2 e1_hat;  ///< toward the predecessor
  UnitVector2 e2_hat;  ///< toward the successor
};

/// Cones at a reflex vertex spanned by ±e1, ±e2. M1 and M3 are open,
/// M2 = cone{e1, −e2} and M4 = cone{−e1, e2} are closed.
enum class Quadrant { M1, M2, M3, M4 };

struct BoundaryEdge {
  std::size_t a;
  std::size_t b;
};

struct ProjectedRay {
  Point2 origin;
  UnitVector2 direction;
  double length = std::numeric_limits<double>::infinity();
  bool grazing = false;  ///< ±1e-10 rad nudges disagreed on the length

  bool is_infinite() const { return !std::isfinite(length); }
  Point2 endpoint() const { return origin + length * direction.vec(); }
};

/// Free space Q \ int(holes), stored with free space on the left of every
/// directed boundary edge: the outer ring counter-clockwise, holes clockwise.
/// Immutable once built.
class FreeSpace {
 public:
  explicit FreeSpace(Environment env);

  /// The environment as stored (reoriented rings).
  const Environment& environment() const { return env_; }
  std::span<const Point2> vertices() const { return vertices_; }
  Point2 vertex(std::size_t id) const { return vertices_[id]; }
  const VertexRef& provenance(std::size_t id) const { return provenance_[id]; }
  std::span<const BoundaryEdge> edges() const { return edges_; }
  std::span<const ReflexVertexInfo> reflex() const { return reflex_; }
  /// Index into reflex() for a flattened vertex id, if that vertex is reflex.
  std::optional<std::size_t> reflex_index(std::size_t vertex_id) const;
  bool is_reflex(std::size_t vertex_id) const { return reflex_index(vertex_id).has_value(); }
  std::size_t predecessor(std::size_t id) const { return pred_[id]; }
  std::size_t successor(std::size_t id) const { return succ_[id]; }

  /// Flattened id of the stored vertex equal to p within eps_geom.
  std::optional<std::size_t> find_vertex(Point2 p) const;

  double diameter() const { return diameter_; }
  double eps_geom() const { return eps_geom_; }
  double eps_rv() const { return eps_rv_; }
  double area() const { return area_; }

  Quadrant quadrant(const ReflexVertexInfo& r, Point2 x) const;

 private:
  Environment env_;
  std::vector<Point2> vertices_;
  std::vector<VertexRef> provenance_;
  std::vector<BoundaryEdge> edges_;
  std::vector<std::size_t> pred_;
  std::vector<std::size_t> succ_;
  std::vector<ReflexVertexInfo> reflex_;
  std::vector<std::ptrdiff_t> reflex_lookup_;
  double diameter_ = 0.0;
  double eps_geom_ = 0.0;
  double eps_rv_ = 0.0;
  double area_ = 0.0;
};

FreeSpace build_free_space(Environment env);

PointClass point_in_free_space(const FreeSpace& fs, Point2 p);
bool segment_in_free_space(const FreeSpace& fs, Point2 a, Point2 b);

/// Distance travelled from `origin` along `dir` before first leaving free
/// space; 0 when the ray leaves immediately.
double free_run_length(const FreeSpace& fs, Point2 origin, UnitVector2 dir);

/// Ray from v pointing away from x, clipped at the first boundary hit.
ProjectedRay project_ray(const FreeSpace& fs, Point2 v, Point2 x);
/// As project_ray with v−x rotated clockwise by theta.
ProjectedRay project_rotated_ray(const FreeSpace& fs, Point2 v, Point2 x, double theta);
std::vector<ProjectedRay> ray_bundle(const FreeSpace& fs, Point2 v, Point2 x, double theta1, double theta2,
                                     std::size_t n);

bool direction_feasible(const FreeSpace& fs, Point2 x, UnitVector2 nu, double h);

/// Pushes a boundary (or near-boundary) point a short way into the interior.
Point2 nudge_inward(const FreeSpace& fs, Point2 x);

/// Distance from p to the nearest point of the free-space boundary.
double boundary_distance(const FreeSpace& fs, Point2 p);

}  // namespace visopt
