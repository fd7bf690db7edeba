#include "parker/presets.hpp"

#include "parker/error.hpp"

namespace parker {

namespace {

PhysicalParams base_params(double gamma, double g) {
  PhysicalParams p;
  p.gamma = gamma;
  p.A = 1.0;
  p.lambda = 1.0;
  p.mu1 = 0.01;
  p.nu = 0.01;
  p.gravity = Gravity::constant(g);
  return p;
}

std::vector<Preset> catalog() {
  std::vector<Preset> out;
  {
    Preset p{"uniform-g0", "rho = 1, g = 0: no buoyancy source, uniform field", base_params(5.0 / 3.0, 0.0),
             DensitySpec::constant(1.0), -1.0, 1.0, {}};
    out.push_back(p);
  }
  {
    // margin just above the level that keeps T <= 0 everywhere, so only the xi1 > 0 branch is unstable
    Preset p{"schwarzschild-exp", "rho = exp(-x), g = 8, weak field (kappa > 1), T < 0 everywhere",
             base_params(1.0, 8.0), DensitySpec::exponential(1.0, 1.0), -1.0, 1.0, 1.55};
    out.push_back(p);
  }
  {
    Preset p{"strong-field", "schwarzschild-exp density and gravity with a strong field (kappa <= 1)",
             base_params(1.0, 8.0), DensitySpec::exponential(1.0, 1.0), -1.0, 1.0, 20.0};
    out.push_back(p);
  }
  {
    Preset p{"tserkovnikov-layer", "rho = exp(-x/1.25), g = 3, field weak at the top where T > 0",
             base_params(1.0, 3.0), DensitySpec::exponential(1.0, 1.25), -1.0, 1.0, 0.05};
    out.push_back(p);
  }
  {
    Preset p{"rt-tanh", "rho = 1 + 0.5 tanh(x/0.2): heavy fluid on top", base_params(5.0 / 3.0, 1.0),
             DensitySpec::tanh_layer(1.0, 0.5, 0.0, 0.2), -1.0, 1.0, {}};
    out.push_back(p);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& p : catalog()) v.push_back(p.name);
    return v;
  }();
  return names;
}

Preset find_preset(const std::string& name) {
  for (auto& p : catalog()) {
    if (p.name == name) return p;
  }
  fail(Errc::InvalidArgument, "unknown preset '" + name + "'");
}

EquilibriumProfile build_preset(const Preset& preset, int n) {
  return build_equilibrium(preset.params, preset.density, build_grid(preset.lo, preset.hi, n),
                           preset.margin);
}

EquilibriumProfile build_preset(const std::string& name, int n) {
  return build_preset(find_preset(name), n);
}

}  // namespace parker
