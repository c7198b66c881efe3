#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "visopt/critical_structure.hpp"
#include "visopt/errors.hpp"
#include "visopt/gradients.hpp"
#include "visopt/metrics.hpp"
#include "visopt/norcent.hpp"
#include "visopt/render.hpp"
#include "visopt/scenario.hpp"
#include "visopt/serialize.hpp"
#include "visopt/visibility.hpp"

namespace fs = std::filesystem;
using namespace visopt;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitRuntime = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPolygon:
    case ErrorKind::HoleOutsideOuter:
    case ErrorKind::OverlappingHoles:
    case ErrorKind::ObserverOutsideFreeSpace:
    case ErrorKind::OutsideFreeSpace:
    case ErrorKind::InvalidInput:
      return kExitInput;
    case ErrorKind::ArrangementDegeneracy:
    case ErrorKind::DegenerateRay:
      return kExitDegenerate;
    default:
      return kExitRuntime;
  }
}

Point2 parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error(ErrorKind::InvalidInput, "--at: expected X,Y");
  try {
    std::size_t used = 0;
    const double x = std::stod(text.substr(0, comma), &used);
    const double y = std::stod(text.substr(comma + 1));
    return {x, y};
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "--at: expected X,Y, got '" + text + "'");
  }
}

struct Context {
  std::string scenario_path;
  std::string out_dir = ".";
  std::optional<Scenario> scenario;
  std::unique_ptr<FreeSpace> fspace;

  void load() {
    scenario = load_scenario(scenario_path);
    fspace = std::make_unique<FreeSpace>(scenario->environment);
    validate_scenario(*scenario, *fspace);
    if (scenario->name.empty()) scenario->name = fs::path(scenario_path).stem().string();
    fs::create_directories(out_dir);
  }

  const Scenario& sc() const { return *scenario; }
  std::string out(const std::string& suffix) const { return (fs::path(out_dir) / (sc().name + suffix)).string(); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  f << content;
  std::cout << "wrote " << path << "\n";
}

int cmd_visibility(Context& ctx, const std::string& at) {
  ctx.load();
  const Point2 x = parse_point(at);
  const FreeSpace& F = *ctx.fspace;
  if (point_in_free_space(F, x) == PointClass::exterior) {
    throw Error(ErrorKind::ObserverOutsideFreeSpace, "--at: point is outside free space");
  }
  const MetricConfig cfg = metric_config(ctx.sc());
  const VisibilityRegion full = visibility_polygon(F, x);
  std::cout << "V_area=" << format_real(full.area) << "\n";
  std::cout << "V=" << format_real(metric_V(F, cfg, x)) << "\n";
  VisibilityRegion shown = full;
  if (cfg.range && !cfg.fov) {
    std::cout << "V_range=" << format_real(metric_V_range(F, cfg, x)) << "\n";
    shown = limited_visibility_region(F, x, *cfg.range);
  }
  if (cfg.fov) {
    const double heading = *heading_radians(ctx.sc());
    std::cout << "V_fov=" << format_real(metric_V_fov(F, cfg, Pose::make(x, heading))) << "\n";
    const double R = cfg.range.value_or(F.diameter());
    shown = limited_visibility_region(F, x, R, heading, *cfg.fov);
  }
  write_file(ctx.out("_visibility.json"), region_to_json(shown).dump(2) + "\n");
  Scene scene;
  scene.fs = &F;
  scene.d1 = &ctx.sc().d1;
  scene.d2 = &ctx.sc().d2;
  scene.regions.push_back(shown);
  write_file(ctx.out("_visibility.svg"),
             render_svg(scene, {Layer::environment, Layer::d2, Layer::visibility_region_at}));
  return 0;
}

int cmd_structures(Context& ctx) {
  ctx.load();
  const FreeSpace& F = *ctx.fspace;
  const CriticalStructure cs = build_critical_structure(F);
  const auto names = vertex_names(ctx.sc(), F);
  std::cout << "reflex=" << F.reflex().size() << " segments=" << cs.segments.size()
            << " bound=" << segment_count_bound(F.reflex().size()) << " faces=" << cs.faces.size() << "\n";
  for (const PartitionFace& f : cs.faces) {
    std::cout << "face " << f.id << " " << anchor_label(f.anchor_set, names) << " area=" << format_real(f.polygon.area())
              << "\n";
  }
  write_file(ctx.out("_structures.json"), structure_to_json(F, cs, names).dump(2) + "\n");
  Scene scene;
  scene.fs = &F;
  scene.cs = &cs;
  scene.names = names;
  write_file(ctx.out("_structures.svg"),
             render_svg(scene, {Layer::environment, Layer::inflection_segments, Layer::partition_faces}));
  return 0;
}

int cmd_grad(Context& ctx, std::size_t grid) {
  ctx.load();
  const FreeSpace& F = *ctx.fspace;
  const CriticalStructure cs = build_critical_structure(F);
  const auto field = gradient_field(F, cs, metric_config(ctx.sc()), ctx.sc().d1, grid);
  double max_rel = 0.0;
  std::size_t smooth = 0;
  for (const GradientSample& s : field) {
    if (s.status != SampleStatus::smooth) continue;
    ++smooth;
    max_rel = std::max(max_rel, s.rel_err);
  }
  write_file(ctx.out("_grad.csv"), gradient_field_csv(field));
  std::cout << "max_rel_err=" << format_real(max_rel) << " smooth=" << smooth << " marked=" << field.size() - smooth
            << "\n";
  return 0;
}

std::vector<NorcentRun> optimize_runs(const Context& ctx, const AugmentedObjective& obj, const NorcentConfig& nc,
                                      bool parallel) {
  if (ctx.sc().starts.empty()) throw Error(ErrorKind::InvalidInput, "starts: at least one start is required");
  return run_multistart(obj, nc, ctx.sc().starts, parallel);
}

int cmd_optimize(Context& ctx, std::optional<std::uint64_t> seed, bool parallel) {
  ctx.load();
  const FreeSpace& F = *ctx.fspace;
  const MetricConfig cfg = metric_config(ctx.sc());
  if (cfg.fov) throw Error(ErrorKind::InvalidInput, "sensing: field-of-view metrics cannot be optimized");
  const CriticalStructure cs = build_critical_structure(F);
  NorcentConfig nc = norcent_config(ctx.sc(), F);
  if (seed) nc.seed = *seed;
  const AugmentedObjective obj(F, &cs, cfg, ctx.sc().d1, ctx.sc().mode);
  const auto runs = optimize_runs(ctx, obj, nc, parallel);
  const double tol = compass_tolerance(obj);
  bool failed = false;
  nlohmann::json doc{{"scenario", ctx.sc().name},
                     {"mode", ctx.sc().mode == Mode::minimize ? "min" : "max"},
                     {"config", config_to_json(nc)},
                     {"runs", nlohmann::json::array()}};
  Scene scene;
  scene.fs = &F;
  scene.d1 = &ctx.sc().d1;
  scene.d2 = &ctx.sc().d2;
  scene.runs = &runs;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const NorcentRun& r = runs[i];
    doc["runs"].push_back(run_to_json(r));
    if (!r.error.empty()) {
      failed = true;
      std::cout << "run " << i << " error: " << r.error << "\n";
      continue;
    }
    const bool local = passes_compass_test(obj, nc, r.final, tol);
    std::cout << "run " << i << " final=(" << format_real(r.final.x) << "," << format_real(r.final.y)
              << ") value=" << format_real(obj.value(r.final)) << " iterations=" << r.iterates.size() - 1
              << " converged=" << (r.converged ? "yes" : "no") << " compass=" << (local ? "pass" : "fail") << "\n";
    scene.regions.push_back(visibility_polygon(F, nudge_inward(F, r.final)));
  }
  write_file(ctx.out("_trajectories.csv"), trajectories_csv(runs));
  write_file(ctx.out("_runs.json"), doc.dump(2) + "\n");
  std::vector<Layer> layers{Layer::environment, Layer::d1, Layer::d2};
  if (!scene.regions.empty()) layers.push_back(Layer::visibility_region_at);
  layers.push_back(Layer::trajectories);
  write_file(ctx.out("_optimize.svg"), render_svg(scene, layers));
  return failed ? kExitRuntime : 0;
}

int cmd_render(Context& ctx, const std::string& layer_list, const std::string& at, std::size_t grid,
               std::optional<std::uint64_t> seed) {
  ctx.load();
  std::vector<Layer> layers;
  std::stringstream ss(layer_list);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto l = parse_layer(item);
    if (!l) throw Error(ErrorKind::InvalidInput, "--layers: unknown layer '" + item + "'");
    layers.push_back(*l);
  }
  if (layers.empty()) throw Error(ErrorKind::InvalidInput, "--layers: at least one layer is required");
  auto wants = [&](Layer l) { return std::find(layers.begin(), layers.end(), l) != layers.end(); };
  const FreeSpace& F = *ctx.fspace;
  Scene scene;
  scene.fs = &F;
  scene.d1 = &ctx.sc().d1;
  scene.d2 = &ctx.sc().d2;
  scene.names = vertex_names(ctx.sc(), F);
  std::optional<CriticalStructure> cs;
  if (wants(Layer::inflection_segments) || wants(Layer::partition_faces) || wants(Layer::gradient_field) ||
      wants(Layer::trajectories)) {
    cs = build_critical_structure(F);
    scene.cs = &*cs;
  }
  if (wants(Layer::visibility_region_at)) {
    if (at.empty()) throw Error(ErrorKind::InvalidInput, "--at: required for visibility_region_at");
    const Point2 x = parse_point(at);
    if (point_in_free_space(F, x) == PointClass::exterior) {
      throw Error(ErrorKind::ObserverOutsideFreeSpace, "--at: point is outside free space");
    }
    scene.regions.push_back(visibility_polygon(F, x));
  }
  std::vector<GradientSample> field;
  if (wants(Layer::gradient_field)) {
    field = gradient_field(F, *cs, metric_config(ctx.sc()), ctx.sc().d1, grid);
    scene.field = &field;
  }
  std::vector<NorcentRun> runs;
  if (wants(Layer::trajectories)) {
    NorcentConfig nc = norcent_config(ctx.sc(), F);
    if (seed) nc.seed = *seed;
    const AugmentedObjective obj(F, &*cs, metric_config(ctx.sc()), ctx.sc().d1, ctx.sc().mode);
    runs = optimize_runs(ctx, obj, nc, false);
    scene.runs = &runs;
  }
  write_file(ctx.out("_render.svg"), render_svg(scene, layers));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visibility-based placement: visibility regions, critical structures and Norcent optimization"};
  app.require_subcommand(1);
  Context ctx;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", ctx.scenario_path, "Scenario JSON file")->required();
    sub->add_option("--out-dir", ctx.out_dir, "Directory for output files");
  };

  std::string at;
  std::size_t grid = 25;
  std::optional<std::uint64_t> seed;
  bool parallel = false;
  std::string layer_list;

  auto* vis = app.add_subcommand("visibility", "Visibility region and metrics at a point");
  add_common(vis);
  vis->add_option("--at", at, "Observer position X,Y")->required();

  auto* st = app.add_subcommand("structures", "Inflection segments and the labelled convex partition");
  add_common(st);

  auto* gr = app.add_subcommand("grad", "Gradient field over D1 checked against finite differences");
  add_common(gr);
  gr->add_option("--grid", grid, "Grid resolution per axis")->check(CLI::Range(2, 1000));

  auto* opt = app.add_subcommand("optimize", "Multistart Norcent runs");
  add_common(opt);
  opt->add_option("--seed", seed, "Base seed (overrides the scenario)");
  opt->add_flag("--parallel", parallel, "Run starts on worker threads");

  auto* ren = app.add_subcommand("render", "SVG figure with selected layers");
  add_common(ren);
  ren->add_option("--layers", layer_list, "Comma-separated layers")->required();
  ren->add_option("--at", at, "Observer position X,Y for visibility_region_at");
  ren->add_option("--grid", grid, "Grid resolution for gradient_field")->check(CLI::Range(2, 1000));
  ren->add_option("--seed", seed, "Base seed for trajectories");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*vis) return cmd_visibility(ctx, at);
    if (*st) return cmd_structures(ctx);
    if (*gr) return cmd_grad(ctx, grid);
    if (*opt) return cmd_optimize(ctx, seed, parallel);
    if (*ren) return cmd_render(ctx, layer_list, at, grid, seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
