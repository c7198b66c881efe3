#include "visopt/norcent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "visopt/errors.hpp"
#include "visopt/gradients.hpp"

namespace visopt {

Projection project_to_domain(const Polygon& d1, Point2 x, double eps) {
  const auto& ring = d1.vertices();
  if (classify_point(ring, x, 0.0) != PointClass::exterior) return {x, 1};
  const std::size_t n = ring.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<Point2> cands;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 c = closest_point_on_segment(x, ring[i], ring[(i + 1) % n]);
    cands.push_back(c);
    best = std::min(best, distance(x, c));
  }
  std::vector<Point2> ties;
  for (const Point2& c : cands) {
    if (distance(x, c) > best + eps) continue;
    const bool seen = std::any_of(ties.begin(), ties.end(), [&](Point2 t) { return distance(t, c) <= std::max(eps, 1e-15); });
    if (!seen) ties.push_back(c);
  }
  const Point2 win = *std::min_element(ties.begin(), ties.end(), [](Point2 a, Point2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  return {win, ties.size()};
}

AugmentedObjective::AugmentedObjective(const FreeSpace& fs, const CriticalStructure* cs, MetricConfig cfg, Polygon d1,
                                       Mode mode)
    : fs_(fs), cs_(cs), cfg_(std::move(cfg)), d1_(std::move(d1)), mode_(mode) {
  if (cfg_.fov) throw Error(ErrorKind::InvalidInput, "field-of-view metrics are evaluated, not optimized");
  const auto& ring = d1_.vertices();
  if (!is_strictly_simple(ring, fs_.eps_geom())) throw Error(ErrorKind::InvalidInput, "d1 is not a simple polygon");
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (!segment_in_free_space(fs_, ring[i], ring[(i + 1) % ring.size()])) {
      throw Error(ErrorKind::InvalidInput, "d1 edge " + std::to_string(i) + " leaves free space");
    }
  }
  for (const Polygon& h : fs_.environment().holes) {
    if (classify_point(ring, h[0], fs_.eps_geom()) == PointClass::interior) {
      throw Error(ErrorKind::InvalidInput, "d1 contains an obstacle");
    }
  }
}

double AugmentedObjective::base(Point2 p) const {
  return cfg_.range ? metric_V_range(fs_, cfg_, p) : metric_V(fs_, cfg_, p);
}

Projection AugmentedObjective::project(Point2 x) const { return project_to_domain(d1_, x, fs_.eps_geom()); }

double AugmentedObjective::distance_to_d1(Point2 x) const { return distance(x, project(x).point); }

double AugmentedObjective::value(Point2 x) const {
  const Projection p = project(x);
  const double d = distance(x, p.point);
  const double v = base(p.point);
  return mode_ == Mode::minimize ? v + d : v - d;
}

double AugmentedObjective::descent_value(Point2 x) const {
  return mode_ == Mode::minimize ? value(x) : -value(x);
}

double augmented_value(const AugmentedObjective& obj, Point2 x) { return obj.value(x); }

NorcentConfig NorcentConfig::defaults(const FreeSpace& fs) {
  const double D = fs.diameter();
  NorcentConfig c;
  c.a0 = 0.05 * D;
  c.p_a = 0.75;
  c.b0 = 0.02 * D;
  c.p_b = 0.5;
  c.dth0 = 1e-3 * D;
  c.p_th = 0.25;
  c.delta_tol = 1e-10 * fs.area();
  c.max_iter = 5000;
  c.patience = 10;
  c.seed = 0;
  c.fd_h = 1e-6 * D;
  return c;
}

void NorcentConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::InvalidInput, "norcent: " + m); };
  if (!(p_a > 0.5 && p_a <= 1.0)) fail("p_a must lie in (1/2, 1]");
  if (!(p_b > 0.0 && p_b <= 0.5)) fail("p_b must lie in (0, 1/2]");
  if (!(p_th > 0.0)) fail("p_th must be positive");
  if (!(a0 > 0 && b0 > 0 && dth0 > 0 && delta_tol > 0 && fd_h > 0)) fail("a0, b0, dth0, delta_tol, fd_h must be positive");
  if (patience == 0) fail("patience must be at least 1");
}

double NorcentConfig::a(std::size_t k) const { return a0 / std::pow(1.0 + static_cast<double>(k), p_a); }
double NorcentConfig::b(std::size_t k) const { return b0 / std::pow(1.0 + static_cast<double>(k), p_b); }
double NorcentConfig::dth(std::size_t k) const { return dth0 / std::pow(1.0 + static_cast<double>(k), p_th); }

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::gradient: return "gradient";
    case StepKind::random: return "random";
    case StepKind::stop: return "stop";
  }
  return "unknown";
}

namespace {

Point2 fd_gradient(const AugmentedObjective& obj, const NorcentConfig& cfg, Point2 x) {
  const double f0 = obj.descent_value(x);
  const double h = cfg.fd_h;
  return {(obj.descent_value(x + Point2{h, 0.0}) - f0) / h, (obj.descent_value(x + Point2{0.0, h}) - f0) / h};
}

}  // namespace

GradientEstimate descent_gradient(const AugmentedObjective& obj, const NorcentConfig& cfg, Point2 x) {
  const Projection p = obj.project(x);
  const double d = distance(x, p.point);
  if (d > 0.0) {
    // Outside D1 the distance term drives the step straight back.
    return {(x - p.point) / d, true, false};
  }
  const FreeSpace& fs = obj.free_space();
  const bool analytic_ok = obj.critical_structure() != nullptr && !obj.metric().range &&
                           boundary_distance(obj.d1().vertices(), x) > 2.0 * cfg.fd_h;
  if (analytic_ok) {
    try {
      const double sign = obj.mode() == Mode::minimize ? 1.0 : -1.0;
      const auto* cs = obj.critical_structure();
      const double g1 = dd_metric(fs, *cs, obj.metric(), x, UnitVector2::from({1.0, 0.0})).value;
      const double g2 = dd_metric(fs, *cs, obj.metric(), x, UnitVector2::from({0.0, 1.0})).value;
      return {{sign * g1, sign * g2}, true, false};
    } catch (const Error&) {
      return {fd_gradient(obj, cfg, x), false, true};
    }
  }
  return {fd_gradient(obj, cfg, x), false, false};
}

StepResult norcent_step(const AugmentedObjective& obj, const NorcentConfig& cfg, Point2 x, std::size_t k, Rng& rng) {
  const GradientEstimate g = descent_gradient(obj, cfg, x);
  const double gn = norm(g.grad);
  const bool inside = obj.project(x).point == x;
  if (gn <= cfg.dth(k) && inside) {
    const double ang = 2.0 * kPi * rng.uniform01();
    return {x - cfg.b(k) * Point2{std::cos(ang), std::sin(ang)}, StepKind::random, g};
  }
  return {x - (cfg.a(k) / gn) * g.grad, StepKind::gradient, g};
}

NorcentRun run_norcent(const AugmentedObjective& obj, const NorcentConfig& cfg, Point2 x0) {
  cfg.validate();
  if (!is_finite(x0) || !(obj.distance_to_d1(x0) < cfg.a0)) {
    throw Error(ErrorKind::InvalidInput, "start point is not within a0 of d1");
  }
  NorcentRun run;
  run.start = x0;
  run.seed_used = cfg.seed;
  Rng rng(cfg.seed);
  Point2 x = x0;
  double f = obj.descent_value(x);
  std::size_t streak = 0;
  std::size_t k = 0;
  for (; k < cfg.max_iter; ++k) {
    const StepResult s = norcent_step(obj, cfg, x, k, rng);
    if (s.gradient.fallback) ++run.fd_fallbacks;
    run.iterates.push_back({k, x, obj.mode() == Mode::minimize ? f : -f, norm(s.gradient.grad), s.gradient.grad, s.kind});
    const double f_next = obj.descent_value(s.next);
    streak = std::abs(f_next - f) < cfg.delta_tol ? streak + 1 : 0;
    x = s.next;
    f = f_next;
    if (streak >= cfg.patience) {
      run.converged = true;
      ++k;
      break;
    }
  }
  const GradientEstimate g = descent_gradient(obj, cfg, x);
  run.iterates.push_back({k, x, obj.mode() == Mode::minimize ? f : -f, norm(g.grad), g.grad, StepKind::stop});
  run.final = x;
  return run;
}

std::vector<NorcentRun> run_multistart(const AugmentedObjective& obj, const NorcentConfig& cfg,
                                       const std::vector<Point2>& starts, bool parallel) {
  std::vector<NorcentRun> runs(starts.size());
  auto one = [&](std::size_t i) {
    NorcentConfig c = cfg;
    c.seed = cfg.seed ^ static_cast<std::uint64_t>(i);
    try {
      runs[i] = run_norcent(obj, c, starts[i]);
    } catch (const std::exception& e) {
      runs[i].start = starts[i];
      runs[i].final = starts[i];
      runs[i].seed_used = c.seed;
      runs[i].error = e.what();
    }
  };
  if (!parallel || starts.size() < 2) {
    for (std::size_t i = 0; i < starts.size(); ++i) one(i);
    return runs;
  }
  const std::size_t workers =
      std::min<std::size_t>(starts.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < starts.size(); i += workers) one(i);
    });
  }
  for (std::thread& t : pool) t.join();
  return runs;
}

double compass_tolerance(const AugmentedObjective& obj) {
  return 1e-3 * obj.metric().d2.area() / obj.free_space().diameter();
}

bool passes_compass_test(const AugmentedObjective& obj, const NorcentConfig& cfg, Point2 x, double tol) {
  const double h = cfg.fd_h;
  x = obj.project(x).point;
  const double f0 = obj.descent_value(x);
  for (int i = 0; i < 16; ++i) {
    const UnitVector2 nu = UnitVector2::from_angle(2.0 * kPi * i / 16.0);
    const Point2 y = x + h * nu.vec();
    if (classify_point(obj.d1().vertices(), y, 0.0) == PointClass::exterior) continue;
    double slope;
    try {
      if (obj.critical_structure() == nullptr || obj.metric().range) throw Error(ErrorKind::GradientUnavailable, "fd");
      const double sign = obj.mode() == Mode::minimize ? 1.0 : -1.0;
      slope = sign * dd_metric(obj.free_space(), *obj.critical_structure(), obj.metric(), x, nu).value;
    } catch (const Error&) {
      slope = (obj.descent_value(y) - f0) / h;
    }
    if (slope < -tol) return false;
  }
  return true;
}

}  // namespace visopt
