#include "visopt/serialize.hpp"

#include <charconv>
#include <sstream>

#include "visopt/errors.hpp"

namespace visopt {

using nlohmann::json;

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

json point_json(Point2 p) { return json::array({p.x, p.y}); }

Point2 point_from(const json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw Error(ErrorKind::InvalidInput, "expected [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

json ring_json(const std::vector<Point2>& ring) {
  json out = json::array();
  for (const Point2& p : ring) out.push_back(point_json(p));
  return out;
}

const char* status_name(SampleStatus s) {
  switch (s) {
    case SampleStatus::smooth: return "smooth";
    case SampleStatus::on_segment: return "segment";
    case SampleStatus::near_reflex: return "reflex";
    case SampleStatus::near_boundary: return "boundary";
  }
  return "unknown";
}

}  // namespace

json region_to_json(const VisibilityRegion& region) {
  json edges = json::array();
  for (const RegionEdge& e : region.boundary) {
    if (const auto* l = std::get_if<LinearEdge>(&e)) {
      edges.push_back({{"type", "line"}, {"a", point_json(l->a)}, {"b", point_json(l->b)}});
    } else {
      const auto& a = std::get<ArcEdge>(e);
      edges.push_back({{"type", "arc"},
                       {"center", point_json(a.center)},
                       {"radius", a.radius},
                       {"theta_start", a.theta_start},
                       {"theta_end", a.theta_end}});
    }
  }
  return {{"observer", point_json(region.observer)}, {"area", region.area}, {"edges", edges}};
}

VisibilityRegion region_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("observer") || !doc.contains("edges")) {
    throw Error(ErrorKind::InvalidInput, "region: expected {observer, edges}");
  }
  VisibilityRegion r;
  r.observer = point_from(doc.at("observer"));
  for (const json& e : doc.at("edges")) {
    const std::string type = e.value("type", "");
    if (type == "line") {
      r.boundary.push_back(LinearEdge{point_from(e.at("a")), point_from(e.at("b"))});
    } else if (type == "arc") {
      r.boundary.push_back(ArcEdge{point_from(e.at("center")), e.at("radius").get<double>(),
                                   e.at("theta_start").get<double>(), e.at("theta_end").get<double>()});
    } else {
      throw Error(ErrorKind::InvalidInput, "region: unknown edge type '" + type + "'");
    }
  }
  r.area = region_area(r.boundary);
  return r;
}

std::string anchor_label(const std::vector<std::size_t>& ids, const std::map<std::size_t, std::string>& names) {
  std::string out = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ",";
    const auto it = names.find(ids[i]);
    out += it != names.end() ? it->second : "v" + std::to_string(ids[i]);
  }
  return out + "}";
}

json structure_to_json(const FreeSpace& fs, const CriticalStructure& cs, const std::map<std::size_t, std::string>& names) {
  json reflex = json::array();
  for (const ReflexVertexInfo& r : fs.reflex()) {
    reflex.push_back({{"id", r.id}, {"name", names.count(r.id) ? names.at(r.id) : ""}, {"at", point_json(r.vertex)}});
  }
  json segs = json::array();
  for (const InflectionSegment& s : cs.segments) {
    json j{{"id", s.id},
           {"kind", s.kind == SegmentKind::TypeI ? "I" : "II"},
           {"generators", s.generators},
           {"a", point_json(s.a)},
           {"b", point_json(s.b)}};
    j["anchor_delta"] = s.anchor_delta ? json(*s.anchor_delta) : json(nullptr);
    segs.push_back(j);
  }
  json faces = json::array();
  for (const PartitionFace& f : cs.faces) {
    faces.push_back({{"id", f.id},
                     {"polygon", ring_json(f.polygon.vertices())},
                     {"area", f.polygon.area()},
                     {"anchors", f.anchor_set},
                     {"label", anchor_label(f.anchor_set, names)},
                     {"sample", point_json(f.sample)}});
  }
  json adj = json::array();
  for (const FaceAdjacency& a : cs.adjacency) {
    adj.push_back({{"faces", {a.face_a, a.face_b}}, {"segments", a.segments}});
  }
  const std::size_t nr = fs.reflex().size();
  return {{"reflex", reflex},
          {"segment_count", cs.segments.size()},
          {"segment_bound", segment_count_bound(nr)},
          {"segments", segs},
          {"faces", faces},
          {"adjacency", adj}};
}

json config_to_json(const NorcentConfig& c) {
  return {{"a0", c.a0},     {"p_a", c.p_a},     {"b0", c.b0},
          {"p_b", c.p_b},   {"dth0", c.dth0},   {"p_th", c.p_th},
          {"delta_tol", c.delta_tol}, {"max_iter", c.max_iter}, {"patience", c.patience},
          {"seed", c.seed}, {"fd_h", c.fd_h}};
}

json run_to_json(const NorcentRun& run) {
  json rows = json::array();
  for (const Iterate& it : run.iterates) {
    rows.push_back({{"k", it.k},
                    {"x", point_json(it.x)},
                    {"value", it.value},
                    {"grad_norm", it.grad_norm},
                    {"step_kind", to_string(it.kind)}});
  }
  json j{{"start", point_json(run.start)},
         {"final", point_json(run.final)},
         {"converged", run.converged},
         {"seed", run.seed_used},
         {"fd_fallbacks", run.fd_fallbacks},
         {"iterates", rows}};
  if (!run.error.empty()) j["error"] = run.error;
  return j;
}

std::string trajectories_csv(const std::vector<NorcentRun>& runs) {
  std::ostringstream out;
  out << "run,k,x,y,value,grad_norm,step_kind\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (const Iterate& it : runs[r].iterates) {
      out << r << ',' << it.k << ',' << format_real(it.x.x) << ',' << format_real(it.x.y) << ','
          << format_real(it.value) << ',' << format_real(it.grad_norm) << ',' << to_string(it.kind) << '\n';
    }
  }
  return out.str();
}

std::string gradient_field_csv(const std::vector<GradientSample>& samples) {
  std::ostringstream out;
  out << "x,y,status,gx,gy,fd_gx,fd_gy,rel_err\n";
  for (const GradientSample& s : samples) {
    out << format_real(s.x.x) << ',' << format_real(s.x.y) << ',' << status_name(s.status);
    if (s.status == SampleStatus::smooth) {
      out << ',' << format_real(s.analytic.x) << ',' << format_real(s.analytic.y) << ',' << format_real(s.fd.x) << ','
          << format_real(s.fd.y) << ',' << format_real(s.rel_err);
    } else {
      out << ",,,,,";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace visopt
