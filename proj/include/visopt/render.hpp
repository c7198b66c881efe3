#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "visopt/critical_structure.hpp"
#include "visopt/gradients.hpp"
#include "visopt/norcent.hpp"
#include "visopt/visibility.hpp"

namespace visopt {

enum class Layer {
  environment,
  d1,
  d2,
  inflection_segments,
  partition_faces,
  visibility_region_at,
  gradient_field,
  trajectories,
};

const char* to_string(Layer layer);
std::optional<Layer> parse_layer(std::string_view name);

/// Everything a figure may draw; layers whose data is absent cannot be
/// requested.
struct Scene {
  const FreeSpace* fs = nullptr;
  const Polygon* d1 = nullptr;
  const Polygon* d2 = nullptr;
  const CriticalStructure* cs = nullptr;
  std::map<std::size_t, std::string> names;
  std::vector<VisibilityRegion> regions;
  const std::vector<GradientSample>* field = nullptr;
  const std::vector<NorcentRun>* runs = nullptr;
};

/// SVG document with one <g id="layer-…"> element per requested layer, in
/// the order given. Throws InvalidInput when a layer's data is missing.
std::string render_svg(const Scene& scene, const std::vector<Layer>& layers);

}  // namespace visopt
