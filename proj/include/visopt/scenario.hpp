#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "visopt/free_space.hpp"
#include "visopt/metrics.hpp"
#include "visopt/norcent.hpp"

namespace visopt {

enum class SensingType { full, range, fov };

/// Sensing model as written in scenario files (angles in degrees).
struct Sensing {
  SensingType type = SensingType::full;
  std::optional<double> range;
  double fov_deg = 360.0;
  double heading_deg = 0.0;
};

/// Optional per-field replacements for the default Norcent schedule.
struct NorcentOverrides {
  std::optional<double> a0, p_a, b0, p_b, dth0, p_th, delta_tol, fd_h;
  std::optional<std::size_t> max_iter, patience;
  std::optional<std::uint64_t> seed;

  NorcentConfig apply(NorcentConfig base) const;
};

struct VertexLabel {
  Point2 at;
  std::string label;
};

struct Scenario {
  std::string name;
  Environment environment;
  Polygon d1;
  Polygon d2;
  Sensing sensing;
  Mode mode = Mode::minimize;
  std::vector<Point2> starts;
  NorcentOverrides norcent;
  std::vector<VertexLabel> labels;  ///< display names for environment vertices
};

/// Parses a scenario document; errors are InvalidInput with a field path
/// such as "d1[2]" or "norcent.p_a".
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

MetricConfig metric_config(const Scenario& sc);
std::optional<double> heading_radians(const Scenario& sc);
NorcentConfig norcent_config(const Scenario& sc, const FreeSpace& fs);

/// Checks d1, d2 ⊆ free space and every start within a0 of d1; errors carry
/// the offending field path.
void validate_scenario(const Scenario& sc, const FreeSpace& fs);

/// Display name of each flattened vertex id: the scenario label when one
/// matches, otherwise "v<id>".
std::map<std::size_t, std::string> vertex_names(const Scenario& sc, const FreeSpace& fs);

}  // namespace visopt
