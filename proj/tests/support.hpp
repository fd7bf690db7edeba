#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "parker/energy.hpp"
#include "parker/profiles.hpp"

namespace testing {

inline constexpr double pi = std::numbers::pi;

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct ConstCase {
  double rho0 = 1.0, g = 0.0, gamma = 1.0, A = 1.0, lambda = 1.0, margin = 1.0;
  double lo = -1.0, hi = 1.0;
  int n = 128;
};

inline parker::EquilibriumProfile constant_profile(const ConstCase& c) {
  parker::PhysicalParams p;
  p.gamma = c.gamma;
  p.A = c.A;
  p.lambda = c.lambda;
  p.gravity = parker::Gravity::constant(c.g);
  return parker::build_equilibrium(p, parker::DensitySpec::constant(c.rho0), parker::build_grid(c.lo, c.hi, c.n),
                                   c.margin);
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

inline parker::ModalField random_field(std::mt19937_64& rng, int n, parker::ModeSpec mode) {
  parker::ModalField f;
  f.mode = mode;
  f.phi = random_vector(rng, n + 1);
  f.theta = random_vector(rng, n + 1);
  f.psi = random_vector(rng, n);
  return f;
}

/// Sine bump sin(pi (x - lo) / (hi - lo)) on the interior nodes.
inline std::vector<double> first_sine(const parker::Grid1D& g) {
  std::vector<double> psi(g.n);
  for (int i = 0; i < g.n; ++i) psi[i] = std::sin(pi * (g.node(i) - g.lo) / (g.hi - g.lo));
  return psi;
}

}  // namespace testing
