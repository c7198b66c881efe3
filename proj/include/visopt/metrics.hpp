#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "visopt/free_space.hpp"
#include "visopt/visibility.hpp"

namespace visopt {

/// Adversary domain plus optional sensing limits. `fov` is the full aperture
/// in radians; a heading is supplied per evaluation.
struct MetricConfig {
  Polygon d2;
  std::optional<double> range;
  std::optional<double> fov;
};

struct Pose {
  Point2 position;
  double heading;  ///< radians in [0, 2π)

  static Pose make(Point2 position, double heading);
};

/// Throws InvalidInput unless d2 ⊆ free space and the sensing parameters are valid.
void validate_metric_config(const FreeSpace& fs, const MetricConfig& cfg);

/// Visible area of D2 with unlimited sensing (range and fov ignored).
double metric_V(const FreeSpace& fs, const MetricConfig& cfg, Point2 x);
double metric_V_area(const FreeSpace& fs, Point2 x);
/// Visible area of D2 within cfg.range of x.
double metric_V_range(const FreeSpace& fs, const MetricConfig& cfg, Point2 x);
/// Visible area of D2 within the sensing cone of the pose.
double metric_V_fov(const FreeSpace& fs, const MetricConfig& cfg, const Pose& z);

/// The metric selected by the config: fov (needs heading), else range, else full.
double metric_value(const FreeSpace& fs, const MetricConfig& cfg, Point2 x, std::optional<double> heading = std::nullopt);

double sym_diff_area(std::span<const Point2> a, std::span<const Point2> b);
/// Curved boundaries are sampled as 512-gons.
double sym_diff_area(const VisibilityRegion& a, const VisibilityRegion& b);

/// Area of the symmetric difference of two radius-R disks at distance d.
double disk_symdiff_formula(double R, double d);

struct LipschitzEstimate {
  double estimate;  ///< max sampled ‖S(y1) Δ S(y2)‖ / ‖y1 − y2‖
  double bound;     ///< |reflex| · D² / (4δ)
  double delta;     ///< half the clearance between the region and reflex vertices
};

LipschitzEstimate lipschitz_estimate(const FreeSpace& fs, const MetricConfig& cfg, const Polygon& region,
                                     std::size_t n_pairs, std::uint64_t seed = 1, double pair_distance = 0.0);

}  // namespace visopt
