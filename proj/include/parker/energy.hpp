#pragma once

#include <span>
#include <vector>

#include "parker/profiles.hpp"

namespace parker {

struct ModeSpec {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double norm2() const { return xi1 * xi1 + xi2 * xi2; }
};

/// Modal amplitudes for u = (-i phi, -i theta, psi) e^{i xi.x_h}.
/// phi and theta live at the n+1 cell midpoints, psi on the n interior nodes.
struct ModalField {
  std::vector<double> phi;
  std::vector<double> theta;
  std::vector<double> psi;
  ModeSpec mode;

  static ModalField zeros(int n, ModeSpec mode);
};

/// Periodic horizontal cell [0, 2 pi L1) x [0, 2 pi L2) sampled n1 x n2, times the vertical grid.
struct SlabGeometry {
  Grid1D vertical;
  double L1 = 1.0;
  double L2 = 1.0;
  int n1 = 16;
  int n2 = 16;

  double area() const;
  double x1(int i) const;
  double x2(int j) const;
};

/// w1, w2 at the cell midpoints, w3 on the interior nodes; layout (i1, i2, k) row-major.
struct GridField3D {
  SlabGeometry geom;
  std::vector<double> w1, w2, w3;

  static GridField3D zeros(const SlabGeometry& geom);
  std::size_t cell_index(int i1, int i2, int c) const;
  std::size_t node_index(int i1, int i2, int k) const;
};

/// Real field phi sin(xi.x_h), theta sin(xi.x_h), psi cos(xi.x_h).
GridField3D lift_modal(const ModalField& f, const SlabGeometry& geom);

/// Tensor-grid quadrature of E(w); horizontal derivatives are spectral, sums run in parallel.
double energy_E_grid(const GridField3D& w, const EquilibriumProfile& prof);
double energy_E_grid_serial(const GridField3D& w, const EquilibriumProfile& prof);
/// Same functional with the buoyancy term written through λ m m'.
double energy_E_rewritten(const GridField3D& w, const EquilibriumProfile& prof);

/// Energy with frequency, in the direct form.
double energy_tilde(const ModalField& f, const EquilibriumProfile& prof);
/// Same value through the completed squares.
double energy_tilde_squares(const ModalField& f, const EquilibriumProfile& prof);

double energy_tilde_2d(std::span<const double> phi, std::span<const double> psi, double xi1,
                       const EquilibriumProfile& prof);
double energy_tilde_2d_squares(std::span<const double> phi, std::span<const double> psi, double xi1,
                               const EquilibriumProfile& prof);

/// mu1 ∫ (|xi|^2 |u|^2 + |u'|^2) + mu2 ∫ div^2 for the mode.
double dissipation(const ModalField& f, const EquilibriumProfile& prof);
/// ∫ rho (phi^2 + theta^2 + psi^2).
double mass_form(const ModalField& f, const EquilibriumProfile& prof);
/// energy_tilde - s dissipation.
double energy_Ec(const ModalField& f, double s, const EquilibriumProfile& prof);

/// Picks theta, phi so that both squares vanish. Requires xi1 > 0.
ModalField newcomb_construction(std::span<const double> psi0, ModeSpec mode,
                                const EquilibriumProfile& prof);
/// 2D variant (xi2 = 0, theta = 0): phi chosen to cancel the pressure square.
ModalField newcomb_construction_2d(std::span<const double> psi0, double xi1,
                                   const EquilibriumProfile& prof);
/// ∫ ((W - λ xi1^2 m^2) psi^2 - λ xi1^2 m^2 / |xi|^2 psi'^2).
double newcomb_reduced_integral(std::span<const double> psi0, ModeSpec mode,
                                const EquilibriumProfile& prof);

/// xi1 = 0 mode with theta cancelling the combined square; phi stored as 0.
ModalField tserkovnikov_construction(std::span<const double> psi0, double xi2,
                                     const EquilibriumProfile& prof);
/// ∫ (g rho' + g^2 rho^2 / (gamma P + λ m^2)) psi^2.
double tserkovnikov_reduced_integral(std::span<const double> psi0, const EquilibriumProfile& prof);

}  // namespace parker
