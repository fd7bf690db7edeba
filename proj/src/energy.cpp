#include "parker/energy.hpp"

#include <unsupported/Eigen/FFT>
#include <cmath>
#include <complex>
#include <numbers>

#include "parker/error.hpp"
#include "parker/stagger.hpp"

namespace parker {

namespace {

void check_sizes(const ModalField& f, const EquilibriumProfile& prof) {
  const std::size_t n = prof.grid.n;
  if (f.psi.size() != n || f.phi.size() != n + 1 || f.theta.size() != n + 1) {
    fail(Errc::InvalidArgument, "modal field does not match the profile grid");
  }
}

void check_psi(std::span<const double> psi, const EquilibriumProfile& prof) {
  if (psi.size() != static_cast<std::size_t>(prof.grid.n)) {
    fail(Errc::InvalidArgument, "psi must live on the interior nodes");
  }
}

// Spectral derivative along one periodic axis of length 2 pi L sampled n times.
class PeriodicDerivative {
 public:
  PeriodicDerivative(int n, double L) : n_(n), L_(L), in_(n), out_(n) {}

  void apply(const double* src, std::ptrdiff_t stride, double* dst, std::ptrdiff_t dst_stride) {
    for (int i = 0; i < n_; ++i) in_[i] = {src[i * stride], 0.0};
    fft_.fwd(out_, in_);
    for (int k = 0; k < n_; ++k) {
      int wave = k <= n_ / 2 ? k : k - n_;
      if (2 * k == n_) wave = 0;  // Nyquist column has no odd derivative
      out_[k] *= std::complex<double>(0.0, wave / L_);
    }
    fft_.inv(in_, out_);
    for (int i = 0; i < n_; ++i) dst[i * dst_stride] = in_[i].real();
  }

 private:
  int n_;
  double L_;
  Eigen::FFT<double> fft_;
  std::vector<std::complex<double>> in_, out_;
};

// d/dx1 and d/dx2 of a (n1, n2, nz) block, all vertical levels.
struct HorizontalDerivatives {
  std::vector<double> d1, d2;
};

HorizontalDerivatives horizontal_derivatives(const std::vector<double>& f, const SlabGeometry& g,
                                             int nz, bool parallel) {
  HorizontalDerivatives out{std::vector<double>(f.size()), std::vector<double>(f.size())};
  const std::ptrdiff_t s1 = static_cast<std::ptrdiff_t>(g.n2) * nz;
  const std::ptrdiff_t s2 = nz;
#pragma omp parallel if (parallel)
  {
    PeriodicDerivative D1(g.n1, g.L1), D2(g.n2, g.L2);
#pragma omp for collapse(2)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      for (int k = 0; k < nz; ++k) {
        const std::size_t base = static_cast<std::size_t>(i2) * s2 + k;
        D1.apply(f.data() + base, s1, out.d1.data() + base, s1);
      }
    }
#pragma omp for collapse(2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      for (int k = 0; k < nz; ++k) {
        const std::size_t base = static_cast<std::size_t>(i1) * s1 + k;
        D2.apply(f.data() + base, s2, out.d2.data() + base, s2);
      }
    }
  }
  return out;
}

enum class BuoyancyForm { direct, rewritten };

double grid_energy(const GridField3D& w, const EquilibriumProfile& prof, BuoyancyForm form,
                   bool parallel) {
  const SlabGeometry& g = w.geom;
  const int n = prof.grid.n;
  if (g.vertical.n != n) fail(Errc::InvalidArgument, "3D field does not match the profile grid");
  const int nc = n + 1;
  const double h = prof.grid.h;
  const double dA = g.area() / (static_cast<double>(g.n1) * g.n2);
  const auto& cs = prof.cells;
  const PhysicalParams& p = prof.params;

  const auto dw1 = horizontal_derivatives(w.w1, g, nc, parallel);
  const auto dw2 = horizontal_derivatives(w.w2, g, nc, parallel);
  const auto dw3 = horizontal_derivatives(w.w3, g, n, parallel);

  double total = 0.0;
#pragma omp parallel for collapse(2) reduction(+ : total) if (parallel)
  for (int i1 = 0; i1 < g.n1; ++i1) {
    for (int i2 = 0; i2 < g.n2; ++i2) {
      double column = 0.0;
      for (int c = 0; c < nc; ++c) {
        const std::size_t ic = w.cell_index(i1, i2, c);
        const double lo3 = c > 0 ? w.w3[w.node_index(i1, i2, c - 1)] : 0.0;
        const double hi3 = c < n ? w.w3[w.node_index(i1, i2, c)] : 0.0;
        const double lo13 = c > 0 ? dw3.d1[w.node_index(i1, i2, c - 1)] : 0.0;
        const double hi13 = c < n ? dw3.d1[w.node_index(i1, i2, c)] : 0.0;
        const double w3 = 0.5 * (lo3 + hi3);
        const double d3w3 = (hi3 - lo3) / h;
        const double d1w3 = 0.5 * (lo13 + hi13);
        const double div = dw1.d1[ic] + dw2.d2[ic] + d3w3;
        const double div_v = dw2.d2[ic] + d3w3;
        const double d1w2 = dw2.d1[ic];

        const double gP = p.gamma * cs.pressure[c];
        const double gr = cs.g[c];
        const double buoy = form == BuoyancyForm::direct
                                ? gr * (cs.drho[c] + gr * cs.rho[c] * cs.rho[c] / gP)
                                : -p.lambda * gr * cs.rho[c] * 0.5 * cs.m2prime[c] / gP;
        const double sq = gr * cs.rho[c] * w3 - gP * div;
        column += buoy * w3 * w3 - sq * sq / gP -
                  p.lambda * cs.m2[c] * (d1w2 * d1w2 + d1w3 * d1w3 + div_v * div_v);
      }
      total += column;
    }
  }
  return total * h * dA;
}

struct CellTerms {
  double psi_bar, dpsi, div;
};

CellTerms cell_terms(const ModalField& f, int c, int n, double h) {
  const double lo = c > 0 ? f.psi[c - 1] : 0.0;
  const double hi = c < n ? f.psi[c] : 0.0;
  const double dpsi = (hi - lo) / h;
  return {0.5 * (lo + hi), dpsi, f.mode.xi1 * f.phi[c] + f.mode.xi2 * f.theta[c] + dpsi};
}

ModalField with_mode(std::span<const double> phi, std::span<const double> psi, double xi1) {
  ModalField f;
  f.phi.assign(phi.begin(), phi.end());
  f.theta.assign(phi.size(), 0.0);
  f.psi.assign(psi.begin(), psi.end());
  f.mode = {xi1, 0.0};
  return f;
}

}  // namespace

ModalField ModalField::zeros(int n, ModeSpec mode) {
  ModalField f;
  f.phi.assign(n + 1, 0.0);
  f.theta.assign(n + 1, 0.0);
  f.psi.assign(n, 0.0);
  f.mode = mode;
  return f;
}

double SlabGeometry::area() const { return 4.0 * std::numbers::pi * std::numbers::pi * L1 * L2; }
double SlabGeometry::x1(int i) const { return 2.0 * std::numbers::pi * L1 * i / n1; }
double SlabGeometry::x2(int j) const { return 2.0 * std::numbers::pi * L2 * j / n2; }

GridField3D GridField3D::zeros(const SlabGeometry& geom) {
  GridField3D w;
  w.geom = geom;
  const std::size_t columns = static_cast<std::size_t>(geom.n1) * geom.n2;
  w.w1.assign(columns * (geom.vertical.n + 1), 0.0);
  w.w2.assign(columns * (geom.vertical.n + 1), 0.0);
  w.w3.assign(columns * geom.vertical.n, 0.0);
  return w;
}

std::size_t GridField3D::cell_index(int i1, int i2, int c) const {
  return (static_cast<std::size_t>(i1) * geom.n2 + i2) * (geom.vertical.n + 1) + c;
}

std::size_t GridField3D::node_index(int i1, int i2, int k) const {
  return (static_cast<std::size_t>(i1) * geom.n2 + i2) * geom.vertical.n + k;
}

GridField3D lift_modal(const ModalField& f, const SlabGeometry& geom) {
  const int n = geom.vertical.n;
  if (f.psi.size() != static_cast<std::size_t>(n) || f.phi.size() != f.psi.size() + 1 ||
      f.theta.size() != f.psi.size() + 1) {
    fail(Errc::InvalidArgument, "modal field does not match the slab grid");
  }
  GridField3D w = GridField3D::zeros(geom);
  for (int i1 = 0; i1 < geom.n1; ++i1) {
    for (int i2 = 0; i2 < geom.n2; ++i2) {
      const double arg = f.mode.xi1 * geom.x1(i1) + f.mode.xi2 * geom.x2(i2);
      const double s = std::sin(arg), c = std::cos(arg);
      for (int j = 0; j <= n; ++j) {
        w.w1[w.cell_index(i1, i2, j)] = f.phi[j] * s;
        w.w2[w.cell_index(i1, i2, j)] = f.theta[j] * s;
      }
      for (int k = 0; k < n; ++k) w.w3[w.node_index(i1, i2, k)] = f.psi[k] * c;
    }
  }
  return w;
}

double energy_E_grid(const GridField3D& w, const EquilibriumProfile& prof) {
  return grid_energy(w, prof, BuoyancyForm::direct, true);
}

double energy_E_grid_serial(const GridField3D& w, const EquilibriumProfile& prof) {
  return grid_energy(w, prof, BuoyancyForm::direct, false);
}

double energy_E_rewritten(const GridField3D& w, const EquilibriumProfile& prof) {
  return grid_energy(w, prof, BuoyancyForm::rewritten, true);
}

double energy_tilde(const ModalField& f, const EquilibriumProfile& prof) {
  check_sizes(f, prof);
  const int n = prof.grid.n;
  const double h = prof.grid.h;
  const auto& cs = prof.cells;
  const PhysicalParams& p = prof.params;
  const double x1 = f.mode.xi1, x2 = f.mode.xi2;
  double sum = 0.0;
  for (int c = 0; c <= n; ++c) {
    const CellTerms t = cell_terms(f, c, n, h);
    const double g = cs.g[c];
    const double vert = x2 * f.theta[c] + t.dpsi;
    sum += g * cs.drho[c] * t.psi_bar * t.psi_bar + 2.0 * g * cs.rho[c] * t.psi_bar * t.div -
           p.gamma * cs.pressure[c] * t.div * t.div -
           p.lambda * cs.m2[c] *
               (x1 * x1 * (f.theta[c] * f.theta[c] + t.psi_bar * t.psi_bar) + vert * vert);
  }
  return sum * h;
}

double energy_tilde_squares(const ModalField& f, const EquilibriumProfile& prof) {
  check_sizes(f, prof);
  const int n = prof.grid.n;
  const double h = prof.grid.h;
  const auto& cs = prof.cells;
  const PhysicalParams& p = prof.params;
  const double x1 = f.mode.xi1, x2 = f.mode.xi2;
  const double k2 = f.mode.norm2();
  double sum = 0.0;
  for (int c = 0; c <= n; ++c) {
    const CellTerms t = cell_terms(f, c, n, h);
    const double g = cs.g[c];
    const double gP = p.gamma * cs.pressure[c];
    const double lm2 = p.lambda * cs.m2[c];
    const double W = g * g * cs.rho[c] * cs.rho[c] / gP + g * cs.drho[c];
    const double pressure_sq = t.div - g * cs.rho[c] * t.psi_bar / gP;
    double field = 0.0;
    if (k2 > 0.0) {
      // xi1^2 theta^2 + (xi2 theta + psi')^2 = |xi|^2 (theta + xi2 psi'/|xi|^2)^2 + xi1^2 psi'^2/|xi|^2
      const double shifted = f.theta[c] + x2 * t.dpsi / k2;
      field = k2 * shifted * shifted + x1 * x1 * t.dpsi * t.dpsi / k2;
    } else {
      field = t.dpsi * t.dpsi;
    }
    sum += (W - lm2 * x1 * x1) * t.psi_bar * t.psi_bar - gP * pressure_sq * pressure_sq - lm2 * field;
  }
  return sum * h;
}

double energy_tilde_2d(std::span<const double> phi, std::span<const double> psi, double xi1,
                       const EquilibriumProfile& prof) {
  if (!(xi1 > 0.0)) fail(Errc::ZeroXi1, "2D energy requires xi1 > 0");
  return energy_tilde(with_mode(phi, psi, xi1), prof);
}

double energy_tilde_2d_squares(std::span<const double> phi, std::span<const double> psi, double xi1,
                               const EquilibriumProfile& prof) {
  if (!(xi1 > 0.0)) fail(Errc::ZeroXi1, "2D energy requires xi1 > 0");
  const ModalField f = with_mode(phi, psi, xi1);
  check_sizes(f, prof);
  const int n = prof.grid.n;
  const double h = prof.grid.h;
  const auto& cs = prof.cells;
  const PhysicalParams& p = prof.params;
  double sum = 0.0;
  for (int c = 0; c <= n; ++c) {
    const CellTerms t = cell_terms(f, c, n, h);
    const double g = cs.g[c];
    const double gP = p.gamma * cs.pressure[c];
    const double lm2 = p.lambda * cs.m2[c];
    const double W = g * g * cs.rho[c] * cs.rho[c] / gP + g * cs.drho[c];
    const double sq = t.div - g * cs.rho[c] * t.psi_bar / gP;
    sum += (W - lm2 * xi1 * xi1) * t.psi_bar * t.psi_bar - lm2 * t.dpsi * t.dpsi - gP * sq * sq;
  }
  return sum * h;
}

double dissipation(const ModalField& f, const EquilibriumProfile& prof) {
  check_sizes(f, prof);
  const int n = prof.grid.n;
  const double h = prof.grid.h;
  const double k2 = f.mode.norm2();
  const PhysicalParams& p = prof.params;

  double shear = 0.0, bulk = 0.0;
  for (int c = 0; c <= n; ++c) {
    const CellTerms t = cell_terms(f, c, n, h);
    shear += h * (k2 * (f.phi[c] * f.phi[c] + f.theta[c] * f.theta[c]) + t.dpsi * t.dpsi);
    bulk += h * t.div * t.div;
  }
  for (int i = 0; i < n; ++i) {
    shear += h * k2 * f.psi[i] * f.psi[i];
    const double dphi = (f.phi[i + 1] - f.phi[i]) / h;
    const double dtheta = (f.theta[i + 1] - f.theta[i]) / h;
    shear += h * (dphi * dphi + dtheta * dtheta);
  }
  // half-cell gradients against the walls
  for (int c : {0, n}) {
    shear += 2.0 / h * (f.phi[c] * f.phi[c] + f.theta[c] * f.theta[c]);
  }
  return p.mu1 * shear + p.mu2() * bulk;
}

double mass_form(const ModalField& f, const EquilibriumProfile& prof) {
  check_sizes(f, prof);
  const int n = prof.grid.n;
  const double h = prof.grid.h;
  double sum = 0.0;
  for (int c = 0; c <= n; ++c) {
    sum += prof.cells.rho[c] * (f.phi[c] * f.phi[c] + f.theta[c] * f.theta[c]);
  }
  for (int i = 0; i < n; ++i) sum += prof.nodes.rho[i] * f.psi[i] * f.psi[i];
  return sum * h;
}

double energy_Ec(const ModalField& f, double s, const EquilibriumProfile& prof) {
  return energy_tilde(f, prof) - s * dissipation(f, prof);
}

ModalField newcomb_construction(std::span<const double> psi0, ModeSpec mode,
                                const EquilibriumProfile& prof) {
  check_psi(psi0, prof);
  if (mode.xi1 == 0.0) fail(Errc::ZeroXi1, "Newcomb construction divides by xi1");
  const double k2 = mode.norm2();
  const int n = prof.grid.n;
  const double h = prof.grid.h;
  const auto& cs = prof.cells;
  ModalField f = ModalField::zeros(n, mode);
  f.psi.assign(psi0.begin(), psi0.end());
  const auto avg = stagger::cell_average(psi0);
  const auto grad = stagger::cell_gradient(psi0, h);
  for (int c = 0; c <= n; ++c) {
    const double gP = prof.params.gamma * cs.pressure[c];
    f.theta[c] = -mode.xi2 * grad[c] / k2;
    f.phi[c] = (cs.g[c] * cs.rho[c] * avg[c] / gP - grad[c] - mode.xi2 * f.theta[c]) / mode.xi1;
  }
  return f;
}

ModalField newcomb_construction_2d(std::span<const double> psi0, double xi1,
                                   const EquilibriumProfile& prof) {
  return newcomb_construction(psi0, ModeSpec{xi1, 0.0}, prof);
}

double newcomb_reduced_integral(std::span<const double> psi0, ModeSpec mode,
                                const EquilibriumProfile& prof) {
  check_psi(psi0, prof);
  const double k2 = mode.norm2();
  if (k2 == 0.0) fail(Errc::InvalidMode, "reduced integral requires |xi| > 0");
  const double h = prof.grid.h;
  const double x = mode.xi1 * mode.xi1;
  const auto W = stagger::instability_weight(prof);
  const auto lm2 = stagger::magnetic_weight(prof);
  const auto avg = stagger::cell_average(psi0);
  const auto grad = stagger::cell_gradient(psi0, h);
  double sum = 0.0;
  for (std::size_t c = 0; c < W.size(); ++c) {
    sum += (W[c] - x * lm2[c]) * avg[c] * avg[c] - x * lm2[c] / k2 * grad[c] * grad[c];
  }
  return sum * h;
}

ModalField tserkovnikov_construction(std::span<const double> psi0, double xi2,
                                     const EquilibriumProfile& prof) {
  check_psi(psi0, prof);
  if (xi2 == 0.0) fail(Errc::ZeroXi2, "Tserkovnikov construction divides by xi2");
  const int n = prof.grid.n;
  const double h = prof.grid.h;
  const auto& cs = prof.cells;
  const PhysicalParams& p = prof.params;
  ModalField f = ModalField::zeros(n, ModeSpec{0.0, xi2});
  f.psi.assign(psi0.begin(), psi0.end());
  const auto avg = stagger::cell_average(psi0);
  const auto grad = stagger::cell_gradient(psi0, h);
  for (int c = 0; c <= n; ++c) {
    const double total = p.gamma * cs.pressure[c] + p.lambda * cs.m2[c];
    f.theta[c] = (cs.g[c] * cs.rho[c] * avg[c] / total - grad[c]) / xi2;
  }
  return f;
}

double tserkovnikov_reduced_integral(std::span<const double> psi0, const EquilibriumProfile& prof) {
  check_psi(psi0, prof);
  const double h = prof.grid.h;
  const auto& cs = prof.cells;
  const PhysicalParams& p = prof.params;
  const auto avg = stagger::cell_average(psi0);
  double sum = 0.0;
  for (std::size_t c = 0; c < avg.size(); ++c) {
    const double g = cs.g[c];
    sum += (g * cs.drho[c] +
            g * g * cs.rho[c] * cs.rho[c] / (p.gamma * cs.pressure[c] + p.lambda * cs.m2[c])) *
           avg[c] * avg[c];
  }
  return sum * h;
}

}  // namespace parker
