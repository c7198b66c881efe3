#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "visopt/critical_structure.hpp"
#include "visopt/free_space.hpp"
#include "visopt/metrics.hpp"
#include "visopt/visibility.hpp"

namespace visopt {

struct AnchorContribution {
  std::size_t anchor;
  double contribution;
};

struct DirectionalDerivative {
  double value = 0.0;
  std::vector<AnchorContribution> per_anchor;
  std::vector<std::size_t> anchors_used;
  bool on_segment = false;      ///< x lies on an inflection segment
  bool along_segment = false;   ///< the probe along ν stayed on a segment
};

/// Directional derivative of the visibility-polygon area. The anchor set is
/// taken from the partition: the face containing x, or the face entered along
/// ν when x sits on a segment.
DirectionalDerivative dd_area(const FreeSpace& fs, const CriticalStructure& cs, Point2 x, UnitVector2 nu);

/// As dd_area with each anchor's term scaled by the D2 fraction of its ray.
DirectionalDerivative dd_metric(const FreeSpace& fs, const CriticalStructure& cs, const MetricConfig& cfg, Point2 x,
                                UnitVector2 nu);

/// ∫₀^r 1_D2(v + s·û) s ds / (r²/2) along the anchor ray.
double c_fraction(const FreeSpace& fs, const MetricConfig& cfg, const ProjectedRay& anchor, Point2 x, UnitVector2 nu);

/// Fraction of the thin triangle swept by the anchor ray between x and
/// x + δν that lies in D2.
double c_fraction_triangle(const FreeSpace& fs, const MetricConfig& cfg, Point2 anchor_vertex, Point2 x, UnitVector2 nu,
                           double delta);

/// Unsigned sum of the per-anchor area terms.
double mu_dd(const FreeSpace& fs, const CriticalStructure& cs, Point2 x, UnitVector2 nu);

enum class GradientObjective { area, metric };

struct GeneralizedGradient {
  std::vector<Point2> generators;  ///< one per neighbouring face
  std::vector<Point2> hull;

  /// Direction u with ⟨g, u⟩ > 0 for every generator, if one exists.
  std::optional<UnitVector2> separating_direction() const;
  bool contains_origin() const { return !separating_direction().has_value(); }
};

GeneralizedGradient generalized_gradient(const FreeSpace& fs, const CriticalStructure& cs, const MetricConfig* cfg,
                                         Point2 x, GradientObjective objective);

/// Generators in an open half-plane ⇔ the largest angular gap exceeds π.
std::optional<UnitVector2> separating_direction(const std::vector<Point2>& generators);

enum class FdScheme { one_sided, central };

double fd_oracle(const std::function<double(Point2)>& f, Point2 x, UnitVector2 nu, double h,
                 FdScheme scheme = FdScheme::one_sided);

enum class SampleStatus { smooth, on_segment, near_reflex, near_boundary };

struct GradientSample {
  Point2 x;
  SampleStatus status;
  Point2 analytic;  ///< (dd_metric along e1, along e2)
  Point2 fd;        ///< central differences with step fd_h
  double rel_err;   ///< max over components of |analytic − fd| / max(|fd|, floor)
};

/// Samples cell centres of an n×n grid over the bounding box of `region`,
/// keeping points inside both the region and free space. Points within
/// 1e-3·D of an inflection segment, within eps_rv of a reflex vertex, or
/// too close to the boundary for the stencil are marked and not evaluated.
/// rel_err is |analytic − fd| / max(|fd|, 0.1·D²) per axis, maximised.
std::vector<GradientSample> gradient_field(const FreeSpace& fs, const CriticalStructure& cs, const MetricConfig& cfg,
                                           const Polygon& region, std::size_t n);

/// Throws TooCloseToReflexVertex when x is within eps_rv of a reflex vertex.
void require_reflex_clearance(const FreeSpace& fs, Point2 x);

}  // namespace visopt
