#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parker/profiles.hpp"

namespace parker {

struct Preset {
  std::string name;
  std::string summary;
  PhysicalParams params;
  DensitySpec density;
  double lo = -1.0;
  double hi = 1.0;
  std::optional<double> margin;  // C - max(P + F); m^2 = 2 margin / λ at the weakest point
};

const std::vector<std::string>& preset_names();

/// Throws InvalidArgument for unknown names.
Preset find_preset(const std::string& name);

EquilibriumProfile build_preset(const Preset& preset, int n);
EquilibriumProfile build_preset(const std::string& name, int n);

}  // namespace parker
