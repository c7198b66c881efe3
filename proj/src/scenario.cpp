#include "visopt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "visopt/errors.hpp"

namespace visopt {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::InvalidInput, path + ": " + msg);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) fail(path.empty() ? key : path + "." + key, "missing");
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path, "expected a finite number");
  return d;
}

Point2 point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected [x, y]");
  return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
}

Polygon polygon(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected a list of [x, y] points");
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < v.size(); ++i) pts.push_back(point(v[i], path + "[" + std::to_string(i) + "]"));
  try {
    return Polygon(std::move(pts));
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

std::size_t count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) fail(path, "expected a non-negative integer");
  return v.get<std::size_t>();
}

Sensing parse_sensing(const json& v) {
  Sensing s;
  if (!v.is_object()) fail("sensing", "expected an object");
  const std::string type = field(v, "type", "sensing").is_string() ? v.at("type").get<std::string>() : "";
  if (type == "full") {
    s.type = SensingType::full;
  } else if (type == "range") {
    s.type = SensingType::range;
    s.range = number(field(v, "R", "sensing"), "sensing.R");
  } else if (type == "fov") {
    s.type = SensingType::fov;
    if (v.contains("R")) s.range = number(v.at("R"), "sensing.R");
    s.fov_deg = number(field(v, "fov_deg", "sensing"), "sensing.fov_deg");
    if (v.contains("heading_deg")) s.heading_deg = number(v.at("heading_deg"), "sensing.heading_deg");
    if (!(s.fov_deg > 0 && s.fov_deg <= 360)) fail("sensing.fov_deg", "must lie in (0, 360]");
  } else {
    fail("sensing.type", "expected \"full\", \"range\" or \"fov\"");
  }
  if (s.range && !(*s.range > 0)) fail("sensing.R", "must be positive");
  return s;
}

NorcentOverrides parse_norcent(const json& v) {
  NorcentOverrides o;
  if (!v.is_object()) fail("norcent", "expected an object");
  auto real = [&](const char* key, std::optional<double>& dst) {
    if (v.contains(key)) dst = number(v.at(key), std::string("norcent.") + key);
  };
  real("a0", o.a0);
  real("p_a", o.p_a);
  real("b0", o.b0);
  real("p_b", o.p_b);
  real("dth0", o.dth0);
  real("p_th", o.p_th);
  real("delta_tol", o.delta_tol);
  real("fd_h", o.fd_h);
  if (v.contains("max_iter")) o.max_iter = count(v.at("max_iter"), "norcent.max_iter");
  if (v.contains("patience")) o.patience = count(v.at("patience"), "norcent.patience");
  if (v.contains("seed")) {
    const json& seed = v.at("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
      fail("norcent.seed", "expected a non-negative integer");
    }
    o.seed = seed.get<std::uint64_t>();
  }
  for (const auto& [key, _] : v.items()) {
    static const char* known[] = {"a0",       "p_a",      "b0",       "p_b",  "dth0", "p_th",
                                  "delta_tol", "fd_h",     "max_iter", "patience", "seed"};
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) fail("norcent." + key, "unknown field");
  }
  return o;
}

}  // namespace

NorcentConfig NorcentOverrides::apply(NorcentConfig c) const {
  if (a0) c.a0 = *a0;
  if (p_a) c.p_a = *p_a;
  if (b0) c.b0 = *b0;
  if (p_b) c.p_b = *p_b;
  if (dth0) c.dth0 = *dth0;
  if (p_th) c.p_th = *p_th;
  if (delta_tol) c.delta_tol = *delta_tol;
  if (fd_h) c.fd_h = *fd_h;
  if (max_iter) c.max_iter = *max_iter;
  if (patience) c.patience = *patience;
  if (seed) c.seed = *seed;
  return c;
}

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) fail("$", "expected a JSON object");
  std::string name;
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) fail("name", "expected a string");
    name = doc.at("name").get<std::string>();
  }
  const json& env = field(doc, "environment", "");
  Polygon outer = polygon(field(env, "outer", "environment"), "environment.outer");
  std::vector<Polygon> holes;
  if (env.contains("holes")) {
    const json& hs = env.at("holes");
    if (!hs.is_array()) fail("environment.holes", "expected a list of polygons");
    for (std::size_t i = 0; i < hs.size(); ++i) holes.push_back(polygon(hs[i], "environment.holes[" + std::to_string(i) + "]"));
  }
  Polygon d1 = polygon(field(doc, "d1", ""), "d1");
  Polygon d2 = polygon(field(doc, "d2", ""), "d2");
  Scenario sc{std::move(name), Environment{std::move(outer), std::move(holes)}, std::move(d1), std::move(d2), Sensing{}, Mode::minimize, {}, {}, {}};
  if (doc.contains("sensing")) sc.sensing = parse_sensing(doc.at("sensing"));
  if (doc.contains("mode")) {
    const json& m = doc.at("mode");
    if (m == "min") {
      sc.mode = Mode::minimize;
    } else if (m == "max") {
      sc.mode = Mode::maximize;
    } else {
      fail("mode", "expected \"min\" or \"max\"");
    }
  }
  if (doc.contains("starts")) {
    const json& st = doc.at("starts");
    if (!st.is_array()) fail("starts", "expected a list of [x, y] points");
    for (std::size_t i = 0; i < st.size(); ++i) sc.starts.push_back(point(st[i], "starts[" + std::to_string(i) + "]"));
  }
  if (doc.contains("norcent")) sc.norcent = parse_norcent(doc.at("norcent"));
  if (doc.contains("labels")) {
    const json& ls = doc.at("labels");
    if (!ls.is_array()) fail("labels", "expected a list of {at, label}");
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const std::string p = "labels[" + std::to_string(i) + "]";
      const json& l = field(ls[i], "label", p);
      if (!l.is_string()) fail(p + ".label", "expected a string");
      sc.labels.push_back({point(field(ls[i], "at", p), p + ".at"), l.get<std::string>()});
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open scenario file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
  }
  return parse_scenario(doc);
}

MetricConfig metric_config(const Scenario& sc) {
  MetricConfig cfg{sc.d2, sc.sensing.range, std::nullopt};
  if (sc.sensing.type == SensingType::fov) cfg.fov = sc.sensing.fov_deg * kPi / 180.0;
  if (sc.sensing.type == SensingType::full) cfg.range.reset();
  return cfg;
}

std::optional<double> heading_radians(const Scenario& sc) {
  if (sc.sensing.type != SensingType::fov) return std::nullopt;
  return sc.sensing.heading_deg * kPi / 180.0;
}

NorcentConfig norcent_config(const Scenario& sc, const FreeSpace& fs) {
  return sc.norcent.apply(NorcentConfig::defaults(fs));
}

void validate_scenario(const Scenario& sc, const FreeSpace& fs) {
  auto within = [&](const Polygon& p, const std::string& path) {
    const auto& ring = p.vertices();
    if (!is_strictly_simple(ring, fs.eps_geom())) fail(path, "not a simple polygon");
    for (std::size_t i = 0; i < ring.size(); ++i) {
      if (!segment_in_free_space(fs, ring[i], ring[(i + 1) % ring.size()])) {
        fail(path, "edge " + std::to_string(i) + " leaves free space");
      }
    }
    for (std::size_t h = 0; h < fs.environment().holes.size(); ++h) {
      if (classify_point(ring, fs.environment().holes[h][0], fs.eps_geom()) == PointClass::interior) {
        fail(path, "contains obstacle " + std::to_string(h));
      }
    }
  };
  within(sc.d1, "d1");
  within(sc.d2, "d2");
  try {
    validate_metric_config(fs, metric_config(sc));
  } catch (const Error& e) {
    fail("sensing", e.what());
  }
  const NorcentConfig nc = norcent_config(sc, fs);
  try {
    nc.validate();
  } catch (const Error& e) {
    fail("norcent", e.what());
  }
  for (std::size_t i = 0; i < sc.starts.size(); ++i) {
    const Point2 p = sc.starts[i];
    const double d = distance(p, project_to_domain(sc.d1, p).point);
    if (!(d < nc.a0)) fail("starts[" + std::to_string(i) + "]", "farther than a0 from d1");
  }
}

std::map<std::size_t, std::string> vertex_names(const Scenario& sc, const FreeSpace& fs) {
  std::map<std::size_t, std::string> names;
  for (std::size_t id = 0; id < fs.vertices().size(); ++id) names[id] = "v" + std::to_string(id);
  for (const VertexLabel& l : sc.labels) {
    if (const auto id = fs.find_vertex(l.at)) names[*id] = l.label;
  }
  return names;
}

}  // namespace visopt
