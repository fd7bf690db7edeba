#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "parker/spline.hpp"

namespace parker {

/// Gravity g(x3) >= 0: a constant or a spline through samples.
class Gravity {
 public:
  Gravity() = default;
  static Gravity constant(double g);
  static Gravity sampled(std::span<const double> x, std::span<const double> g);

  double operator()(double x) const;
  bool is_constant() const { return !table_; }
  double constant_value() const { return value_; }

 private:
  double value_ = 0.0;
  std::shared_ptr<const CubicSpline> table_;
};

struct PhysicalParams {
  double lambda = 1.0;  // permeability / 4π
  double gamma = 1.0;   // adiabatic index
  double A = 1.0;       // P = A rho^gamma
  double mu1 = 0.01;    // shear viscosity
  double nu = 0.01;     // bulk viscosity
  Gravity gravity = Gravity::constant(1.0);

  double mu2() const { return nu + mu1 / 3.0; }
  double pressure(double rho) const;
  /// P'(rho) = A gamma rho^(gamma-1), the squared sound speed.
  double sound_speed_sq(double rho) const;
  void validate() const;
};

/// Uniform grid on [lo, hi] with n interior nodes; endpoints carry Dirichlet data
/// and are not part of `nodes`. Cell j spans [lo + j h, lo + (j+1) h], j = 0..n.
struct Grid1D {
  double lo = 0.0;
  double hi = 1.0;
  int n = 0;
  double h = 0.0;
  std::vector<double> nodes;

  int cells() const { return n + 1; }
  double node(int i) const { return lo + (i + 1) * h; }
  double cell_center(int j) const { return lo + (j + 0.5) * h; }
};

Grid1D build_grid(double lo, double hi, int n);

enum class DensityKind { constant, exponential, tanh_layer, tabulated };

/// rho(x3):
///   constant     rho0
///   exponential  rho0 exp(-x / H)
///   tanh_layer   rho0 + jump tanh((x - center) / width)   (jump > 0: heavy on top)
///   tabulated    natural cubic spline through samples
struct DensitySpec {
  DensityKind kind = DensityKind::constant;
  double rho0 = 1.0;
  double scale_height = 1.0;
  double jump = 0.0;
  double center = 0.0;
  double width = 0.1;
  std::shared_ptr<const CubicSpline> table;

  static DensitySpec constant(double rho0);
  static DensitySpec exponential(double rho0, double scale_height);
  static DensitySpec tanh_layer(double rho0, double jump, double center, double width);
  static DensitySpec tabulated(std::span<const double> x, std::span<const double> rho);

  double value(double x) const;
  double derivative(double x) const;
};

/// Equilibrium quantities sampled at one set of abscissae.
struct ProfileSamples {
  std::vector<double> x;
  std::vector<double> rho, drho;
  std::vector<double> pressure, dpressure;
  std::vector<double> m, dm;
  std::vector<double> m2, m2prime;  // m^2 and (m^2)'
  std::vector<double> g;

  std::size_t size() const { return x.size(); }
};

/// Magnetohydrostatic state (rho, 0, m e1) with P' + λ m m' + g rho = 0.
///
/// Sampled on the interior nodes (`nodes`, size n), the cell midpoints (`cells`,
/// size n+1) and the closed node set including both endpoints (`closed`, size n+2).
/// Derivatives come from fourth-order differences on the half-step grid, except
/// drho which is the exact (or spline) derivative of the density.
struct EquilibriumProfile {
  Grid1D grid;
  PhysicalParams params;
  double C = 0.0;
  double margin = 0.0;
  ProfileSamples nodes;
  ProfileSamples cells;
  ProfileSamples closed;
  /// Set when m has been overridden and the balance no longer holds.
  bool synthetic_field = false;
};

/// Builds the equilibrium; margin defaults to 0.5 max(P).
EquilibriumProfile build_equilibrium(const PhysicalParams& params, const DensitySpec& dens,
                                     const Grid1D& grid, std::optional<double> margin = {});

/// max over interior nodes of |P' + λ m m' + g rho|, with λ m m' = (λ/2)(m^2)'.
double equilibrium_residual(const EquilibriumProfile& prof);

/// 1e-6 max|g rho| + 1e-12.
double balance_tolerance(const EquilibriumProfile& prof);

/// m -> s m with rho, g held fixed. Breaks the balance; marks the profile synthetic.
EquilibriumProfile scale_field(const EquilibriumProfile& prof, double s);

/// m -> m0 everywhere (synthetic).
EquilibriumProfile with_constant_field(const EquilibriumProfile& prof, double m0);

/// Reads `x3 rho` rows ('#' comments allowed).
DensitySpec load_tabulated_profile(const std::filesystem::path& path);

}  // namespace parker
