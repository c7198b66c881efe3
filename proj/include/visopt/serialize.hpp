#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "visopt/critical_structure.hpp"
#include "visopt/gradients.hpp"
#include "visopt/norcent.hpp"
#include "visopt/visibility.hpp"

namespace visopt {

/// Shortest decimal form that parses back to the same double.
std::string format_real(double v);

nlohmann::json region_to_json(const VisibilityRegion& region);
VisibilityRegion region_from_json(const nlohmann::json& doc);

/// "{o1,o2}" style label of a set of vertex ids.
std::string anchor_label(const std::vector<std::size_t>& ids, const std::map<std::size_t, std::string>& names);

nlohmann::json structure_to_json(const FreeSpace& fs, const CriticalStructure& cs,
                                 const std::map<std::size_t, std::string>& names);

nlohmann::json config_to_json(const NorcentConfig& cfg);
nlohmann::json run_to_json(const NorcentRun& run);

/// One row per iterate: run,k,x,y,value,grad_norm,step_kind.
std::string trajectories_csv(const std::vector<NorcentRun>& runs);

/// One row per grid point: x,y,status,gx,gy,fd_gx,fd_gy,rel_err.
std::string gradient_field_csv(const std::vector<GradientSample>& samples);

}  // namespace visopt
