#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "visopt/critical_structure.hpp"
#include "visopt/free_space.hpp"
#include "visopt/metrics.hpp"
#include "visopt/random.hpp"

namespace visopt {

enum class Mode { minimize, maximize };

struct Projection {
  Point2 point;
  std::size_t multiplicity;
};

/// Nearest point of the closed polygon d1; ties within eps resolve to the
/// lexicographically smallest candidate.
Projection project_to_domain(const Polygon& d1, Point2 x, double eps = 0.0);

/// Base metric evaluated at the projection onto D1, plus (minimize) or minus
/// (maximize) the distance to D1. Holds references: the free space and
/// critical structure must outlive it.
class AugmentedObjective {
 public:
  AugmentedObjective(const FreeSpace& fs, const CriticalStructure* cs, MetricConfig cfg, Polygon d1, Mode mode);

  const FreeSpace& free_space() const { return fs_; }
  const CriticalStructure* critical_structure() const { return cs_; }
  const MetricConfig& metric() const { return cfg_; }
  const Polygon& d1() const { return d1_; }
  Mode mode() const { return mode_; }

  double base(Point2 p) const;
  /// The augmented objective in its natural sign.
  double value(Point2 x) const;
  /// Function that Norcent descends: value for minimize, −value for maximize.
  double descent_value(Point2 x) const;
  Projection project(Point2 x) const;
  double distance_to_d1(Point2 x) const;

 private:
  const FreeSpace& fs_;
  const CriticalStructure* cs_;
  MetricConfig cfg_;
  Polygon d1_;
  Mode mode_;
};

double augmented_value(const AugmentedObjective& obj, Point2 x);

struct NorcentConfig {
  double a0 = 1.0;
  double p_a = 0.75;
  double b0 = 1.0;
  double p_b = 0.5;
  double dth0 = 1e-3;
  double p_th = 0.25;
  double delta_tol = 1e-10;
  std::size_t max_iter = 5000;
  std::size_t patience = 10;
  std::uint64_t seed = 0;
  double fd_h = 1e-6;

  static NorcentConfig defaults(const FreeSpace& fs);
  void validate() const;
  double a(std::size_t k) const;
  double b(std::size_t k) const;
  double dth(std::size_t k) const;
};

enum class StepKind { gradient, random, stop };

const char* to_string(StepKind kind);

struct Iterate {
  std::size_t k;
  Point2 x;
  double value;      ///< augmented objective (natural sign) at x
  double grad_norm;  ///< ‖ν‖ of the descent gradient at x
  Point2 grad;       ///< descent gradient at x
  StepKind kind;     ///< step taken from x
};

struct NorcentRun {
  std::vector<Iterate> iterates;
  Point2 start;
  Point2 final;
  bool converged = false;
  std::uint64_t seed_used = 0;
  std::size_t fd_fallbacks = 0;  ///< analytic gradient unavailable, finite differences used
  std::string error;             ///< set when the run failed
};

struct GradientEstimate {
  Point2 grad;
  bool analytic = false;
  bool fallback = false;
};

/// Gradient of the descent function from one-sided derivatives along
/// e1 and e2 (outside D1: the gradient of the distance term).
GradientEstimate descent_gradient(const AugmentedObjective& obj, const NorcentConfig& cfg, Point2 x);

struct StepResult {
  Point2 next;
  StepKind kind;
  GradientEstimate gradient;
};

StepResult norcent_step(const AugmentedObjective& obj, const NorcentConfig& cfg, Point2 x, std::size_t k, Rng& rng);

NorcentRun run_norcent(const AugmentedObjective& obj, const NorcentConfig& cfg, Point2 x0);

/// Run i uses seed cfg.seed ^ i; output order follows `starts` regardless of
/// scheduling.
std::vector<NorcentRun> run_multistart(const AugmentedObjective& obj, const NorcentConfig& cfg,
                                       const std::vector<Point2>& starts, bool parallel);

/// 1e-3 × area(D2) / D: the slack allowed in the compass test.
double compass_tolerance(const AugmentedObjective& obj);

/// One-sided derivatives of the descent function along 16 compass directions
/// that stay in D1 are all ≥ −tol, evaluated at the projection of x onto D1.
bool passes_compass_test(const AugmentedObjective& obj, const NorcentConfig& cfg, Point2 x, double tol);

}  // namespace visopt
