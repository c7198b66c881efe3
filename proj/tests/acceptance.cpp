#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "visopt/clipping.hpp"
#include "visopt/critical_structure.hpp"
#include "visopt/free_space.hpp"
#include "visopt/gradients.hpp"
#include "visopt/metrics.hpp"
#include "visopt/norcent.hpp"
#include "visopt/scenario.hpp"
#include "visopt/serialize.hpp"
#include "visopt/visibility.hpp"

using namespace visopt;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::size_t id_of(const FreeSpace& fs, const std::string& name) { return *fs.find_vertex(fixtures::ref_named().at(name)); }

std::set<std::size_t> ids_of(const FreeSpace& fs, std::initializer_list<const char*> names) {
  std::set<std::size_t> out;
  for (const char* n : names) out.insert(id_of(fs, n));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// 1 ------------------------------------------------------------------------
Outcome reflex_and_anchors() {
  Outcome o;
  const FreeSpace fs(fixtures::ref_environment());
  std::set<Point2, bool (*)(Point2, Point2)> got([](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  for (const ReflexVertexInfo& r : fs.reflex()) got.insert(r.vertex);
  decltype(got) want(got.key_comp());
  for (const auto& [name, p] : fixtures::ref_named()) want.insert(p);
  o.require(got == want && fs.reflex().size() == 6, "reflex set differs from {q3,q6,o1,o2,o3,o4}");
  const AnchorSet as = anchors(fs, {3, 0});
  o.require(as.anchors.size() == 3, "anchor count at (3,0) is " + std::to_string(as.anchors.size()));
  auto orient = [&](const char* n) -> int {
    const Anchor* a = as.find(id_of(fs, n));
    if (!a) return 0;
    return a->orientation == AnchorOrientation::positive ? 1 : -1;
  };
  o.require(orient("o1") == 1 && orient("o2") == -1 && orient("o4") == 1, "anchor orientations at (3,0) are not (+,-,+)");
  if (o.ok) o.detail = "reflex set of 6 and anchors o1+, o2-, o4+ at (3,0)";
  return o;
}

// 2 ------------------------------------------------------------------------
Outcome dual_characterization() {
  Outcome o;
  const auto env = fixtures::ref_environment();
  const FreeSpace fs(env);
  std::size_t agree = 0, total = 0, orient_checked = 0;
  for (const Point2& x : fixtures::random_free_points(env, 200, 2024)) {
    const AnchorSet quad = anchors(fs, x);
    const auto def = anchors_by_definition(fs, x);
    for (const ReflexVertexInfo& r : fs.reflex()) {
      ++total;
      const bool a = quad.find(r.id) != nullptr;
      const bool b = std::find(def.begin(), def.end(), r.id) != def.end();
      bool same = a == b;
      if (same && a) {
        const auto od = orientation_by_definition(fs, x, r.id);
        if (od) {
          ++orient_checked;
          same = *od == quad.find(r.id)->orientation;
        }
      }
      if (same) ++agree;
    }
  }
  o.require(agree == total, std::to_string(total - agree) + " disagreements");
  if (o.ok) o.detail = std::to_string(agree) + "/" + std::to_string(total) + " (point, vertex) pairs agree; " +
             std::to_string(orient_checked) + " orientations cross-checked";
  return o;
}

// 3 ------------------------------------------------------------------------
Outcome partition() {
  Outcome o;
  const FreeSpace fs(fixtures::ref_environment());
  const CriticalStructure cs = build_critical_structure(fs);
  double total = 0.0;
  Rng rng(77);
  for (const PartitionFace& f : cs.faces) {
    const auto& ring = f.polygon.vertices();
    int pos = 0, neg = 0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const double t = fixtures::turn(ring[i], ring[(i + 1) % ring.size()], ring[(i + 2) % ring.size()]);
      if (t > 1e-12) ++pos;
      if (t < -1e-12) ++neg;
    }
    o.require(pos == 0 || neg == 0, "face " + std::to_string(f.id) + " is not convex");
    total += std::abs(fixtures::shoelace(ring));
    // Interior samples: convex combinations of the vertices pulled toward the centroid.
    Point2 c{0, 0};
    for (const Point2& p : ring) c = c + p;
    c = c / static_cast<double>(ring.size());
    for (int s = 0; s < 10; ++s) {
      Point2 p{0, 0};
      double wsum = 0.0;
      for (const Point2& v : ring) {
        const double w = rng.uniform01();
        p = p + w * v;
        wsum += w;
      }
      p = lerp(c, p / wsum, 0.9);
      const auto ids = anchors(fs, p).ids();
      o.require(ids == f.anchor_set, "anchor set varies inside face " + std::to_string(f.id));
    }
  }
  const double rel = std::abs(total - fs.area()) / fs.area();
  o.require(rel <= 1e-6, "face areas sum off by " + fmt(rel));
  const std::size_t bound = segment_count_bound(fs.reflex().size());
  o.require(cs.segments.size() <= bound, "segment count exceeds bound");
  auto label_at = [&](Point2 x) -> std::set<std::size_t> {
    const Location loc = locate(cs, x);
    if (!std::holds_alternative<FaceHit>(loc)) return {};
    const auto& ids = cs.faces[std::get<FaceHit>(loc).face].anchor_set;
    return {ids.begin(), ids.end()};
  };
  o.require(label_at({5, 0}) == ids_of(fs, {"o1", "o2"}), "label at (5,0) is not {o1,o2}");
  o.require(label_at({2, 2}) == ids_of(fs, {"o1", "o4", "q3"}), "label at (2,2) is not {o1,o4,q3}");
  if (o.ok) {
    o.detail = std::to_string(cs.faces.size()) + " convex faces, area rel err " + fmt(rel) + ", " +
               std::to_string(cs.segments.size()) + " segments <= " + std::to_string(bound);
  }
  return o;
}

// 4 ------------------------------------------------------------------------
Outcome metric_ground_truth() {
  Outcome o;
  const auto env = fixtures::ref_environment();
  const FreeSpace fs(env);
  const MetricConfig strip{fixtures::strip_d2(), std::nullopt, std::nullopt};
  const double v0 = metric_V(fs, strip, {0, 0});
  o.require(v0 == 0.0, "V((0,0)) = " + fmt(v0));
  const std::size_t n = 100000;
  std::size_t checks = 0;
  double worst = 0.0;
  Rng rng(5);
  const auto observers = fixtures::random_free_points(env, 20, 99);
  for (std::size_t i = 0; i < observers.size(); ++i) {
    const Point2 x = observers[i];
    const double R = rng.uniform(1.5, 6.0);
    const double heading = rng.uniform(0.0, 2.0 * kPi);
    const double fov = rng.uniform(0.3, 2.0 * kPi - 0.3);
    MetricConfig cfg{fixtures::strip_d2(), R, fov};
    const auto outer = env.outer.vertices();
    struct Case {
      double exact;
      fixtures::McEstimate mc;
    };
    const Case cases[] = {
        {metric_V_area(fs, x), fixtures::monte_carlo_visible(env, outer, x, n, 1000 + i)},
        {metric_V(fs, cfg, x), fixtures::monte_carlo_visible(env, cfg.d2.vertices(), x, n, 2000 + i)},
        {metric_V_range(fs, cfg, x), fixtures::monte_carlo_visible(env, cfg.d2.vertices(), x, n, 3000 + i, R)},
        {metric_V_fov(fs, cfg, Pose::make(x, heading)),
         fixtures::monte_carlo_visible(env, cfg.d2.vertices(), x, n, 4000 + i, R, heading, fov)},
    };
    for (const Case& c : cases) {
      ++checks;
      const double z = std::abs(c.exact - c.mc.value) / c.mc.stderr_;
      worst = std::max(worst, z);
      o.require(z <= 3.0, "observer " + std::to_string(i) + " differs by " + fmt(z) + " standard errors");
    }
  }
  if (o.ok) o.detail = "V((0,0)) = " + fmt(v0) + "; " + std::to_string(checks) + " metric values, worst " + fmt(worst) + " SE";
  return o;
}

// 5 ------------------------------------------------------------------------
Outcome derivative_exactness() {
  Outcome o;
  struct Env {
    visopt::Environment env;
    Polygon d2;
  };
  const Env envs[] = {{fixtures::ref_environment(), fixtures::lshape_d2()},
                      {fixtures::saddle_environment(), fixtures::saddle_d2()}};
  std::size_t checks = 0;
  double worst = 0.0;
  for (std::size_t e = 0; e < 2; ++e) {
    const FreeSpace fs(envs[e].env);
    const CriticalStructure cs = build_critical_structure(fs);
    const MetricConfig cfg{envs[e].d2, std::nullopt, std::nullopt};
    const double D = fs.diameter();
    const double h = 1e-5 * D;
    const auto fa = [&](Point2 p) { return metric_V_area(fs, p); };
    const auto fm = [&](Point2 p) { return metric_V(fs, cfg, p); };
    Rng rng(31 + e);
    std::size_t accepted = 0;
    for (const Point2& x : fixtures::random_free_points(envs[e].env, 2000, 500 + e, 10 * h)) {
      if (accepted == 100) break;
      bool smooth = true;
      for (const InflectionSegment& s : cs.segments) smooth = smooth && point_segment_distance(x, s.a, s.b) > 1e-3 * D;
      for (const ReflexVertexInfo& r : fs.reflex()) smooth = smooth && distance(x, r.vertex) > fs.eps_rv();
      if (!smooth) continue;
      ++accepted;
      for (int k = 0; k < 4; ++k) {
        const UnitVector2 nu = UnitVector2::from_angle(rng.uniform(0.0, 2.0 * kPi));
        const double fd_a = fixtures::central_difference(fa, x, nu.vec(), h);
        const double fd_m = fixtures::central_difference(fm, x, nu.vec(), h);
        const double an_a = dd_area(fs, cs, x, nu).value;
        const double an_m = dd_metric(fs, cs, cfg, x, nu).value;
        for (auto [an, fd] : {std::pair{an_a, fd_a}, std::pair{an_m, fd_m}}) {
          ++checks;
          const double tol = std::max(1e-4 * D * D, 1e-3 * std::abs(fd));
          worst = std::max(worst, std::abs(an - fd) / tol);
          o.require(std::abs(an - fd) <= tol, "mismatch at (" + fmt(x.x) + "," + fmt(x.y) + ")");
        }
      }
    }
    o.require(accepted == 100, "not enough smooth samples");
  }
  const FreeSpace fs(fixtures::ref_environment());
  const CriticalStructure cs = build_critical_structure(fs);
  const double D = fs.diameter();
  const UnitVector2 e1 = UnitVector2::from({1, 0});
  const double hand = dd_area(fs, cs, {2, 2}, e1).value;
  const double fd = fixtures::central_difference([&](Point2 p) { return metric_V_area(fs, p); }, {2, 2}, {1, 0}, 1e-5 * D);
  o.require(std::abs(hand - fd) <= std::max(1e-4 * D * D, 1e-3 * std::abs(fd)), "dd_area((2,2);e1) differs from FD");
  if (o.ok) o.detail = std::to_string(checks) + " comparisons, worst " + fmt(worst) + " of tolerance; dd_area((2,2);e1) = " +
             fmt(hand) + " vs FD " + fmt(fd);
  return o;
}

// 6 ------------------------------------------------------------------------
Outcome mu_dominance() {
  Outcome o;
  const auto env = fixtures::ref_environment();
  const FreeSpace fs(env);
  const CriticalStructure cs = build_critical_structure(fs);
  const Polygon d2s[] = {fixtures::lshape_d2(), fixtures::strip_d2(),
                         Polygon({{-0.5, -0.8}, {10.5, -0.8}, {10.5, 0.5}, {4, 0}, {-0.5, 0.5}})};
  std::size_t checks = 0;
  Rng rng(8);
  const auto pts = fixtures::random_free_points(env, 100, 4242);
  for (const Polygon& d2 : d2s) {
    const MetricConfig cfg{d2, std::nullopt, std::nullopt};
    for (const Point2& x : pts) {
      if (std::any_of(fs.reflex().begin(), fs.reflex().end(),
                      [&](const ReflexVertexInfo& r) { return distance(r.vertex, x) <= fs.eps_rv(); })) {
        continue;
      }
      const UnitVector2 nu = UnitVector2::from_angle(rng.uniform(0.0, 2.0 * kPi));
      const double mu = mu_dd(fs, cs, x, nu);
      const double a = std::abs(dd_area(fs, cs, x, nu).value);
      const double m = std::abs(dd_metric(fs, cs, cfg, x, nu).value);
      checks += 2;
      o.require(mu >= a && mu >= m, "mu_dd below |dd| at (" + fmt(x.x) + "," + fmt(x.y) + ")");
    }
  }
  if (o.ok) o.detail = std::to_string(checks) + " inequalities over 3 D2 polygons";
  return o;
}

// 7 ------------------------------------------------------------------------
Outcome limited_range_identity() {
  Outcome o;
  Rng rng(71);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double R = rng.uniform(0.5, 5.0);
    const double d = R * rng.uniform(0.05, 2.0);
    const double f = disk_symdiff_formula(R, d);
    const auto a = regular_polygon({0, 0}, R, 512);
    const auto b = regular_polygon({d, 0}, R, 512);
    const double num = sym_diff_area(a, b);
    const double rel = std::abs(f - num) / num;
    worst = std::max(worst, rel);
    o.require(rel <= 1e-3, "R=" + fmt(R) + " d=" + fmt(d) + " rel err " + fmt(rel));
    o.require(f <= 4 * R * d, "f_R(d) exceeds 4Rd");
  }
  if (o.ok) o.detail = "20 (R,d) pairs, worst rel err " + fmt(worst) + ", f_R(d) <= 4Rd throughout";
  return o;
}

// 8 and 9 share runs ---------------------------------------------------------
struct Experiment {
  std::string name;
  visopt::Environment env;
  Polygon d1;
  Polygon d2;
  Mode mode;
  std::vector<Point2> starts;
  std::uint64_t seed;
};

std::vector<Point2> strip_starts(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point2> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({rng.uniform(-0.9, 10.9), rng.uniform(-0.9, 0.9)});
  return out;
}

Scenario hide_and_seek() { return load_scenario(std::string(VISOPT_SOURCE_DIR) + "/scenarios/hide_and_seek.json"); }

Outcome norcent_mechanics() {
  Outcome o;
  std::vector<Experiment> exps;
  exps.push_back({"strip", fixtures::ref_environment(), fixtures::strip_d1(), fixtures::strip_d2(), Mode::minimize,
                  strip_starts(20, 9), 100});
  // Starts just outside D1 exercise the distance-term steps.
  exps.push_back({"strip-outside", fixtures::ref_environment(),
                  Polygon({{-0.5, -0.5}, {10.5, -0.5}, {10.5, 0.5}, {-0.5, 0.5}}), fixtures::strip_d2(), Mode::minimize,
                  {{-0.6, 0}, {5, 0.7}, {10.6, -0.6}, {3, -0.65}}, 200});
  exps.push_back({"saddle", fixtures::saddle_environment(), fixtures::saddle_d1(), fixtures::saddle_d2(),
                  Mode::minimize, std::vector<Point2>(20, Point2{0, 0}), 300});
  const Scenario hs = hide_and_seek();
  exps.push_back({"hide_and_seek", hs.environment, hs.d1, hs.d2, Mode::maximize, hs.starts, 400});
  exps.push_back({"strip-max-outside", fixtures::ref_environment(),
                  Polygon({{-0.5, -0.5}, {10.5, -0.5}, {10.5, 0.5}, {-0.5, 0.5}}), fixtures::strip_d2(), Mode::maximize,
                  {{-0.6, 0}, {5, 0.7}, {10.6, -0.6}}, 500});

  std::size_t steps = 0, outside_steps = 0, max_steps = 0;
  for (const Experiment& ex : exps) {
    const FreeSpace fs(ex.env);
    const CriticalStructure cs = build_critical_structure(fs);
    const MetricConfig cfg{ex.d2, std::nullopt, std::nullopt};
    NorcentConfig nc = NorcentConfig::defaults(fs);
    nc.seed = ex.seed;
    const AugmentedObjective obj(fs, &cs, cfg, ex.d1, ex.mode);
    const AugmentedObjective mirror(fs, &cs, cfg, ex.d1, Mode::minimize);
    const double band = std::min(nc.a0, nc.b0);
    for (const NorcentRun& run : run_multistart(obj, nc, ex.starts, false)) {
      o.require(run.error.empty(), ex.name + ": run error " + run.error);
      const auto& it = run.iterates;
      for (std::size_t k = 0; k + 1 < it.size(); ++k) {
        const Point2 x = it[k].x;
        const Point2 y = it[k + 1].x;
        const double len = distance(x, y);
        const double want = it[k].kind == StepKind::random ? nc.b(k) : nc.a(k);
        ++steps;
        o.require(std::abs(len - want) <= 1e-12 * want + 1e-15, ex.name + ": step length is not a_k/b_k");
        o.require(obj.distance_to_d1(y) <= band, ex.name + ": iterate left D1 + B(min(a0,b0))");
        const double dx = obj.distance_to_d1(x);
        if (dx > 0.0) {
          ++outside_steps;
          o.require(obj.distance_to_d1(y) < dx, ex.name + ": distance to D1 did not decrease");
        }
        if (ex.mode == Mode::maximize && it[k].kind == StepKind::gradient) {
          // The maximizer descends −value: inside D1 it moves against the
          // minimizer's step, outside it moves with it (both shrink distance).
          ++max_steps;
          Point2 expected;
          if (dx == 0.0 && boundary_distance(ex.d1.vertices(), x) <= 2.0 * nc.fd_h) {
            // Next to the D1 boundary the step follows a forward difference of −value.
            const auto neg = [&](Point2 p) { return -obj.value(p); };
            const double h = nc.fd_h;
            const Point2 g{(neg(x + Point2{h, 0}) - neg(x)) / h, (neg(x + Point2{0, h}) - neg(x)) / h};
            expected = -(nc.a(k) / norm(g)) * g;
          } else {
            const GradientEstimate g = descent_gradient(mirror, nc, x);
            const Point2 min_step = -(nc.a(k) / norm(g.grad)) * g.grad;
            expected = dx > 0.0 ? min_step : -min_step;
          }
          o.require(distance(y - x, expected) <= 1e-9 * nc.a(k), ex.name + ": maximize step is not descent on −value");
        }
      }
    }
  }
  if (o.ok) o.detail = std::to_string(steps) + " steps checked (" + std::to_string(outside_steps) + " outside D1, " +
             std::to_string(max_steps) + " maximize gradient steps)";
  return o;
}

Outcome convergence() {
  Outcome o;
  std::ostringstream detail;
  {
    const FreeSpace fs(fixtures::ref_environment());
    const CriticalStructure cs = build_critical_structure(fs);
    const MetricConfig cfg{fixtures::strip_d2(), std::nullopt, std::nullopt};
    NorcentConfig nc = NorcentConfig::defaults(fs);
    nc.seed = 2718;
    const AugmentedObjective obj(fs, &cs, cfg, fixtures::strip_d1(), Mode::minimize);
    const auto runs = run_multistart(obj, nc, strip_starts(20, 1234), false);
    const double tol = compass_tolerance(obj);
    std::size_t hidden = 0, converged = 0, compass = 0;
    for (const NorcentRun& r : runs) {
      if (obj.value(r.final) <= 1e-6 * cfg.d2.area()) ++hidden;
      if (r.converged) {
        ++converged;
        if (passes_compass_test(obj, nc, r.final, tol)) ++compass;
      }
    }
    o.require(hidden >= 19, "strip: only " + std::to_string(hidden) + "/20 runs reached V ~ 0");
    o.require(compass == converged, "strip: a converged run failed the compass test");
    detail << "strip " << hidden << "/20 hidden, " << compass << "/" << converged << " converged pass compass; ";
  }
  {
    const FreeSpace fs(fixtures::saddle_environment());
    const CriticalStructure cs = build_critical_structure(fs);
    const MetricConfig cfg{fixtures::saddle_d2(), std::nullopt, std::nullopt};
    NorcentConfig nc = NorcentConfig::defaults(fs);
    nc.seed = 31415;
    const AugmentedObjective obj(fs, &cs, cfg, fixtures::saddle_d1(), Mode::minimize);
    const double saddle = obj.value({0, 0});
    const auto runs = run_multistart(obj, nc, std::vector<Point2>(50, Point2{0, 0}), true);
    const double tol = compass_tolerance(obj);
    std::size_t below = 0, converged = 0, compass = 0;
    for (const NorcentRun& r : runs) {
      if (obj.value(r.final) < saddle) ++below;
      if (r.converged) {
        ++converged;
        if (passes_compass_test(obj, nc, r.final, tol)) ++compass;
      }
    }
    o.require(below * 100 >= 95 * runs.size(), "saddle: only " + std::to_string(below) + "/50 runs escaped");
    o.require(compass == converged, "saddle: a converged run failed the compass test");
    detail << "saddle (V=" << fmt(saddle) << ") " << below << "/50 below, " << compass << "/" << converged
           << " converged pass compass";
  }
  if (o.ok) o.detail = detail.str();
  return o;
}

// 10 -------------------------------------------------------------------------
Outcome determinism() {
  Outcome o;
  const FreeSpace fs(fixtures::ref_environment());
  const CriticalStructure cs = build_critical_structure(fs);
  const MetricConfig cfg{fixtures::strip_d2(), std::nullopt, std::nullopt};
  NorcentConfig nc = NorcentConfig::defaults(fs);
  nc.seed = 42;
  const AugmentedObjective obj(fs, &cs, cfg, fixtures::strip_d1(), Mode::minimize);
  const auto starts = strip_starts(12, 77);
  const std::string a = trajectories_csv(run_multistart(obj, nc, starts, false));
  const std::string b = trajectories_csv(run_multistart(obj, nc, starts, false));
  const std::string c = trajectories_csv(run_multistart(obj, nc, starts, true));
  o.require(a == b, "two serial runs differ");
  o.require(a == c, "serial and parallel runs differ");
  if (o.ok) o.detail = "12 runs, " + std::to_string(a.size()) + " CSV bytes identical serial/serial/parallel";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double limit_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, 1, reflex_and_anchors}, {2, 5, dual_characterization}, {3, 10, partition},       {4, 30, metric_ground_truth},
      {5, 30, derivative_exactness}, {6, 10, mu_dominance},     {7, 5, limited_range_identity},
      {8, 30, norcent_mechanics},   {9, 120, convergence},      {10, 10, determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.limit_s) {
      out.ok = false;
      out.detail += " [over time limit " + fmt(c.limit_s) + " s]";
    }
    std::printf("%s criterion %d: %s (%.2f s)\n", out.ok ? "PASS" : "FAIL", c.id, out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
