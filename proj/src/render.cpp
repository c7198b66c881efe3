#include "visopt/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "visopt/errors.hpp"
#include "visopt/serialize.hpp"

namespace visopt {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 20.0;

struct Frame {
  BBox box;
  double scale;

  double sx(double x) const { return kMargin + (x - box.lo.x) * scale; }
  double sy(double y) const { return kMargin + (box.hi.y - y) * scale; }
  double width() const { return 2 * kMargin + (box.hi.x - box.lo.x) * scale; }
  double height() const { return 2 * kMargin + (box.hi.y - box.lo.y) * scale; }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string points_attr(const Frame& f, const std::vector<Point2>& pts) {
  std::string out;
  for (const Point2& p : pts) {
    if (!out.empty()) out += ' ';
    out += num(f.sx(p.x)) + "," + num(f.sy(p.y));
  }
  return out;
}

std::string ring_path(const Frame& f, const std::vector<Point2>& ring) {
  std::string d;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    d += (i == 0 ? "M" : "L") + num(f.sx(ring[i].x)) + "," + num(f.sy(ring[i].y)) + " ";
  }
  return d + "Z ";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void require(bool ok, Layer layer) {
  if (!ok) throw Error(ErrorKind::InvalidInput, std::string("layer ") + to_string(layer) + " has no data to draw");
}

void draw_layer(std::ostringstream& out, const Frame& f, const Scene& sc, Layer layer) {
  out << "<g id=\"layer-" << to_string(layer) << "\">\n";
  switch (layer) {
    case Layer::environment: {
      const Environment& env = sc.fs->environment();
      std::string d = ring_path(f, env.outer.vertices());
      for (const Polygon& h : env.holes) d += ring_path(f, h.vertices());
      out << "<path d=\"" << d << "\" fill=\"#f6f6f6\" fill-rule=\"evenodd\" stroke=\"#000\" stroke-width=\"1.5\"/>\n";
      for (const Polygon& h : env.holes) {
        out << "<polygon points=\"" << points_attr(f, h.vertices()) << "\" fill=\"#9a9a9a\" stroke=\"#000\"/>\n";
      }
      break;
    }
    case Layer::d1:
      require(sc.d1 != nullptr, layer);
      out << "<polygon points=\"" << points_attr(f, sc.d1->vertices())
          << "\" fill=\"#2e9e44\" fill-opacity=\"0.25\" stroke=\"#2e9e44\" stroke-width=\"1.5\"/>\n";
      break;
    case Layer::d2:
      require(sc.d2 != nullptr, layer);
      out << "<polygon points=\"" << points_attr(f, sc.d2->vertices())
          << "\" fill=\"#d13b3b\" fill-opacity=\"0.25\" stroke=\"#d13b3b\" stroke-width=\"1.5\"/>\n";
      break;
    case Layer::inflection_segments:
      require(sc.cs != nullptr, layer);
      for (const InflectionSegment& s : sc.cs->segments) {
        out << "<line x1=\"" << num(f.sx(s.a.x)) << "\" y1=\"" << num(f.sy(s.a.y)) << "\" x2=\"" << num(f.sx(s.b.x))
            << "\" y2=\"" << num(f.sy(s.b.y)) << "\" stroke=\"#1f5fbf\" stroke-width=\"1\""
            << (s.kind == SegmentKind::TypeII ? " stroke-dasharray=\"5,3\"" : "") << "/>\n";
      }
      break;
    case Layer::partition_faces:
      require(sc.cs != nullptr, layer);
      for (const PartitionFace& face : sc.cs->faces) {
        out << "<polygon points=\"" << points_attr(f, face.polygon.vertices())
            << "\" fill=\"none\" stroke=\"#7a7a7a\" stroke-width=\"0.5\"/>\n";
        out << "<text x=\"" << num(f.sx(face.sample.x)) << "\" y=\"" << num(f.sy(face.sample.y))
            << "\" font-size=\"9\" text-anchor=\"middle\">" << escape(anchor_label(face.anchor_set, sc.names))
            << "</text>\n";
      }
      break;
    case Layer::visibility_region_at:
      require(!sc.regions.empty(), layer);
      for (const VisibilityRegion& r : sc.regions) {
        out << "<polygon points=\"" << points_attr(f, r.to_ring(256))
            << "\" fill=\"#f2c200\" fill-opacity=\"0.35\" stroke=\"#b08d00\" stroke-width=\"1\"/>\n";
        out << "<circle cx=\"" << num(f.sx(r.observer.x)) << "\" cy=\"" << num(f.sy(r.observer.y))
            << "\" r=\"3\" fill=\"#000\"/>\n";
      }
      break;
    case Layer::gradient_field: {
      require(sc.field != nullptr, layer);
      double gmax = 0.0;
      for (const GradientSample& s : *sc.field) {
        if (s.status == SampleStatus::smooth) gmax = std::max(gmax, norm(s.analytic));
      }
      const double len = 12.0;
      for (const GradientSample& s : *sc.field) {
        const double cx = f.sx(s.x.x);
        const double cy = f.sy(s.x.y);
        if (s.status != SampleStatus::smooth) {
          out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"1.2\" fill=\"#bbb\"/>\n";
          continue;
        }
        if (gmax <= 0.0 || norm(s.analytic) <= 0.0) continue;
        const double k = len / gmax;
        out << "<line x1=\"" << num(cx) << "\" y1=\"" << num(cy) << "\" x2=\"" << num(cx + k * s.analytic.x)
            << "\" y2=\"" << num(cy - k * s.analytic.y) << "\" stroke=\"#6b2fa3\" stroke-width=\"0.8\"/>\n";
      }
      break;
    }
    case Layer::trajectories:
      require(sc.runs != nullptr, layer);
      for (const NorcentRun& run : *sc.runs) {
        std::vector<Point2> path;
        for (const Iterate& it : run.iterates) path.push_back(it.x);
        if (path.size() > 1) {
          out << "<polyline points=\"" << points_attr(f, path)
              << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"0.8\"/>\n";
        }
        out << "<circle cx=\"" << num(f.sx(run.start.x)) << "\" cy=\"" << num(f.sy(run.start.y))
            << "\" r=\"4\" fill=\"#d10000\"/>\n";
        out << "<rect x=\"" << num(f.sx(run.final.x) - 4) << "\" y=\"" << num(f.sy(run.final.y) - 4)
            << "\" width=\"8\" height=\"8\" fill=\"#1034c9\"/>\n";
      }
      break;
  }
  out << "</g>\n";
}

}  // namespace

const char* to_string(Layer layer) {
  switch (layer) {
    case Layer::environment: return "environment";
    case Layer::d1: return "d1";
    case Layer::d2: return "d2";
    case Layer::inflection_segments: return "inflection_segments";
    case Layer::partition_faces: return "partition_faces";
    case Layer::visibility_region_at: return "visibility_region_at";
    case Layer::gradient_field: return "gradient_field";
    case Layer::trajectories: return "trajectories";
  }
  return "unknown";
}

std::optional<Layer> parse_layer(std::string_view name) {
  for (Layer l : {Layer::environment, Layer::d1, Layer::d2, Layer::inflection_segments, Layer::partition_faces,
                  Layer::visibility_region_at, Layer::gradient_field, Layer::trajectories}) {
    if (name == to_string(l)) return l;
  }
  return std::nullopt;
}

std::string render_svg(const Scene& scene, const std::vector<Layer>& layers) {
  if (scene.fs == nullptr) throw Error(ErrorKind::InvalidInput, "render needs a free space");
  BBox box = scene.fs->environment().outer.bbox();
  const double span = std::max(box.hi.x - box.lo.x, box.hi.y - box.lo.y);
  const Frame f{box, (kCanvas - 2 * kMargin) / span};
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(f.width()) << "\" height=\"" << num(f.height())
      << "\" viewBox=\"0 0 " << num(f.width()) << " " << num(f.height()) << "\">\n";
  for (Layer l : layers) draw_layer(out, f, scene, l);
  out << "</svg>\n";
  return out.str();
}

}  // namespace visopt
