#include "parker/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "parker/error.hpp"

namespace parker {

Gravity Gravity::constant(double g) {
  if (!(g >= 0.0)) fail(Errc::InvalidArgument, "gravity must be nonnegative");
  Gravity out;
  out.value_ = g;
  return out;
}

Gravity Gravity::sampled(std::span<const double> x, std::span<const double> g) {
  for (double v : g) {
    if (!(v >= 0.0)) fail(Errc::InvalidArgument, "gravity samples must be nonnegative");
  }
  Gravity out;
  out.table_ = std::make_shared<const CubicSpline>(x, g);
  return out;
}

double Gravity::operator()(double x) const { return table_ ? table_->value(x) : value_; }

double PhysicalParams::pressure(double rho) const { return A * std::pow(rho, gamma); }

double PhysicalParams::sound_speed_sq(double rho) const {
  return A * gamma * std::pow(rho, gamma - 1.0);
}

void PhysicalParams::validate() const {
  if (!(lambda > 0.0)) fail(Errc::InvalidArgument, "lambda must be positive");
  if (!(gamma >= 1.0)) fail(Errc::InvalidArgument, "gamma must be >= 1");
  if (!(A > 0.0)) fail(Errc::InvalidArgument, "A must be positive");
  if (!(mu1 > 0.0)) fail(Errc::InvalidArgument, "mu1 must be positive");
  if (!(nu > 0.0)) fail(Errc::InvalidArgument, "nu must be positive");
}

Grid1D build_grid(double lo, double hi, int n) {
  if (!(lo < hi)) fail(Errc::DegenerateInterval, "grid requires lo < hi");
  if (n < 1) fail(Errc::InvalidArgument, "grid requires at least one interior node");
  Grid1D grid;
  grid.lo = lo;
  grid.hi = hi;
  grid.n = n;
  grid.h = (hi - lo) / (n + 1);
  grid.nodes.resize(n);
  for (int i = 0; i < n; ++i) grid.nodes[i] = grid.node(i);
  return grid;
}

DensitySpec DensitySpec::constant(double rho0) {
  DensitySpec d;
  d.kind = DensityKind::constant;
  d.rho0 = rho0;
  return d;
}

DensitySpec DensitySpec::exponential(double rho0, double scale_height) {
  if (!(scale_height > 0.0)) fail(Errc::InvalidArgument, "scale height must be positive");
  DensitySpec d;
  d.kind = DensityKind::exponential;
  d.rho0 = rho0;
  d.scale_height = scale_height;
  return d;
}

DensitySpec DensitySpec::tanh_layer(double rho0, double jump, double center, double width) {
  if (!(width > 0.0)) fail(Errc::InvalidArgument, "layer width must be positive");
  DensitySpec d;
  d.kind = DensityKind::tanh_layer;
  d.rho0 = rho0;
  d.jump = jump;
  d.center = center;
  d.width = width;
  return d;
}

DensitySpec DensitySpec::tabulated(std::span<const double> x, std::span<const double> rho) {
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0)) {
      fail(Errc::NonPositiveDensity, "tabulated density not positive at row " + std::to_string(i + 1));
    }
  }
  DensitySpec d;
  d.kind = DensityKind::tabulated;
  d.table = std::make_shared<const CubicSpline>(x, rho);
  return d;
}

double DensitySpec::value(double x) const {
  switch (kind) {
    case DensityKind::constant: return rho0;
    case DensityKind::exponential: return rho0 * std::exp(-x / scale_height);
    case DensityKind::tanh_layer: return rho0 + jump * std::tanh((x - center) / width);
    case DensityKind::tabulated: return table->value(x);
  }
  return 0.0;
}

double DensitySpec::derivative(double x) const {
  switch (kind) {
    case DensityKind::constant: return 0.0;
    case DensityKind::exponential: return -rho0 * std::exp(-x / scale_height) / scale_height;
    case DensityKind::tanh_layer: {
      const double c = std::cosh((x - center) / width);
      return jump / (width * c * c);
    }
    case DensityKind::tabulated: return table->derivative(x);
  }
  return 0.0;
}

namespace {

// Fourth-order first derivative on a uniform grid (>= 5 points), one-sided near the ends.
std::vector<double> derivative4(const std::vector<double>& f, double dx) {
  const std::size_t k = f.size();
  std::vector<double> d(k);
  const double s = 1.0 / (12.0 * dx);
  d[0] = s * (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]);
  d[1] = s * (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]);
  for (std::size_t i = 2; i + 2 < k; ++i) {
    d[i] = s * (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]);
  }
  d[k - 2] = -s * (-3 * f[k - 1] - 10 * f[k - 2] + 18 * f[k - 3] - 6 * f[k - 4] + f[k - 5]);
  d[k - 1] = -s * (-25 * f[k - 1] + 48 * f[k - 2] - 36 * f[k - 3] + 16 * f[k - 4] - 3 * f[k - 5]);
  return d;
}

// Fourth-order cumulative integral with F[0] = 0 (piecewise cubic Lagrange).
std::vector<double> cumulative_integral4(const std::vector<double>& f, double dx) {
  const std::size_t k = f.size();
  std::vector<double> F(k, 0.0);
  const double s = dx / 24.0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    double step;
    if (i == 0) {
      step = s * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]);
    } else if (i + 2 == k) {
      step = s * (f[i - 2] - 5 * f[i - 1] + 19 * f[i] + 9 * f[i + 1]);
    } else {
      step = s * (-f[i - 1] + 13 * f[i] + 13 * f[i + 1] - f[i + 2]);
    }
    F[i + 1] = F[i] + step;
  }
  return F;
}

ProfileSamples take(const ProfileSamples& half, std::size_t first, std::size_t count) {
  ProfileSamples out;
  auto pick = [&](const std::vector<double>& src, std::vector<double>& dst) {
    dst.resize(count);
    for (std::size_t i = 0; i < count; ++i) dst[i] = src[first + 2 * i];
  };
  pick(half.x, out.x);
  pick(half.rho, out.rho);
  pick(half.drho, out.drho);
  pick(half.pressure, out.pressure);
  pick(half.dpressure, out.dpressure);
  pick(half.m, out.m);
  pick(half.dm, out.dm);
  pick(half.m2, out.m2);
  pick(half.m2prime, out.m2prime);
  pick(half.g, out.g);
  return out;
}

void split_half_grid(const ProfileSamples& half, EquilibriumProfile& prof) {
  const auto n = static_cast<std::size_t>(prof.grid.n);
  prof.closed = take(half, 0, n + 2);
  prof.nodes = take(half, 2, n);
  prof.cells = take(half, 1, n + 1);
}

void transform_field(ProfileSamples& s, double scale, std::optional<double> constant_m) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (constant_m) {
      s.m[i] = *constant_m;
      s.dm[i] = 0.0;
      s.m2[i] = *constant_m * *constant_m;
      s.m2prime[i] = 0.0;
    } else {
      s.m[i] *= scale;
      s.dm[i] *= scale;
      s.m2[i] *= scale * scale;
      s.m2prime[i] *= scale * scale;
    }
  }
}

}  // namespace

EquilibriumProfile build_equilibrium(const PhysicalParams& params, const DensitySpec& dens,
                                     const Grid1D& grid, std::optional<double> margin) {
  params.validate();
  if (margin && !(*margin > 0.0)) fail(Errc::InvalidArgument, "margin must be positive");
  if (grid.n < 8) fail(Errc::InvalidArgument, "equilibrium needs at least 8 interior nodes");

  // Half-step grid: even indices are nodes (incl. endpoints), odd ones cell midpoints.
  const std::size_t k = 2 * static_cast<std::size_t>(grid.n) + 3;
  const double dx = 0.5 * grid.h;
  ProfileSamples half;
  half.x.resize(k);
  half.rho.resize(k);
  half.drho.resize(k);
  half.pressure.resize(k);
  half.g.resize(k);
  std::vector<double> weight(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double x = (i + 1 == k) ? grid.hi : grid.lo + static_cast<double>(i) * dx;
    half.x[i] = x;
    half.rho[i] = dens.value(x);
    if (!(half.rho[i] > 0.0)) {
      fail(Errc::NonPositiveDensity, "density not positive at x3=" + std::to_string(x));
    }
    half.drho[i] = dens.derivative(x);
    half.pressure[i] = params.pressure(half.rho[i]);
    half.g[i] = params.gravity(x);
    if (!(half.g[i] >= 0.0)) fail(Errc::InvalidArgument, "gravity negative at x3=" + std::to_string(x));
    weight[i] = half.g[i] * half.rho[i];
  }

  const std::vector<double> F = cumulative_integral4(weight, dx);
  double max_pf = -INFINITY;
  double max_p = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    max_pf = std::max(max_pf, half.pressure[i] + F[i]);
    max_p = std::max(max_p, half.pressure[i]);
  }

  EquilibriumProfile prof;
  prof.grid = grid;
  prof.params = params;
  prof.margin = margin.value_or(0.5 * max_p);
  prof.C = max_pf + prof.margin;

  half.m.resize(k);
  half.m2.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double radicand = prof.C - half.pressure[i] - F[i];
    if (!(radicand > 0.0)) {
      fail(Errc::NegativeRadicand, "C - P - F not positive at x3=" + std::to_string(half.x[i]));
    }
    half.m2[i] = (2.0 / params.lambda) * radicand;
    half.m[i] = std::sqrt(half.m2[i]);
  }
  half.dpressure = derivative4(half.pressure, dx);
  half.dm = derivative4(half.m, dx);
  half.m2prime = derivative4(half.m2, dx);

  split_half_grid(half, prof);
  return prof;
}

double equilibrium_residual(const EquilibriumProfile& prof) {
  const ProfileSamples& s = prof.nodes;
  const double lambda = prof.params.lambda;
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = s.dpressure[i] + 0.5 * lambda * s.m2prime[i] + s.g[i] * s.rho[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double balance_tolerance(const EquilibriumProfile& prof) {
  double scale = 0.0;
  for (std::size_t i = 0; i < prof.nodes.size(); ++i) {
    scale = std::max(scale, std::abs(prof.nodes.g[i] * prof.nodes.rho[i]));
  }
  return 1e-6 * scale + 1e-12;
}

EquilibriumProfile scale_field(const EquilibriumProfile& prof, double s) {
  if (!(s > 0.0)) fail(Errc::InvalidArgument, "field scale must be positive");
  EquilibriumProfile out = prof;
  for (ProfileSamples* p : {&out.nodes, &out.cells, &out.closed}) transform_field(*p, s, std::nullopt);
  out.synthetic_field = true;
  return out;
}

EquilibriumProfile with_constant_field(const EquilibriumProfile& prof, double m0) {
  if (!(m0 > 0.0)) fail(Errc::InvalidArgument, "constant field must be positive");
  EquilibriumProfile out = prof;
  for (ProfileSamples* p : {&out.nodes, &out.cells, &out.closed}) transform_field(*p, 1.0, m0);
  out.synthetic_field = true;
  return out;
}

DensitySpec load_tabulated_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open " + path.string());
  std::vector<double> xs, rhos;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    double x = 0.0, rho = 0.0;
    std::string extra;
    if (!(row >> x >> rho) || (row >> extra)) {
      fail(Errc::ParseError, path.string() + ":" + std::to_string(lineno) + ": expected `x3 rho`");
    }
    if (!xs.empty() && !(x > xs.back())) {
      fail(Errc::NonMonotoneAbscissa,
           path.string() + ":" + std::to_string(lineno) + ": x3 not strictly increasing");
    }
    if (!(rho > 0.0)) {
      fail(Errc::NonPositiveDensity,
           path.string() + ":" + std::to_string(lineno) + ": density not positive");
    }
    xs.push_back(x);
    rhos.push_back(rho);
  }
  if (xs.size() < 2) fail(Errc::ParseError, path.string() + ": need at least two data rows");
  return DensitySpec::tabulated(xs, rhos);
}

}  // namespace parker
