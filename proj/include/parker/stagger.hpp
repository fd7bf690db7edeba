#pragma once

// Staggered quadrature shared by criteria, energy and spectral: psi on the n
// interior nodes (zero at both endpoints), everything else at the n+1 cell
// midpoints. A form integral is a midpoint sum over cells.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "parker/profiles.hpp"

namespace parker::stagger {

/// (psi_j + psi_{j+1}) / 2 per cell, endpoints zero.
std::vector<double> cell_average(std::span<const double> psi);

/// (psi_{j+1} - psi_j) / h per cell, endpoints zero.
std::vector<double> cell_gradient(std::span<const double> psi, double h);

/// g^2 rho^2 / (gamma P) + g rho' at cell midpoints.
std::vector<double> instability_weight(const EquilibriumProfile& prof);

/// λ m^2 at cell midpoints.
std::vector<double> magnetic_weight(const EquilibriumProfile& prof);

/// Symmetric tridiagonal matrix (n x n).
struct Tridiag {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i+1

  Eigen::MatrixXd dense() const;
  double quadratic(std::span<const double> psi) const;
};

/// Matrix of psi -> sum_c h w_c psibar_c^2.
Tridiag average_form(std::span<const double> w, double h);

/// Matrix of psi -> sum_c h w_c (psi'_c)^2.
Tridiag gradient_form(std::span<const double> w, double h);

/// a A + b B (same size).
Tridiag combine(double a, const Tridiag& A, double b, const Tridiag& B);

/// Number of positive eigenvalues (Sylvester inertia of the LDL^T pivots).
int count_positive(const Tridiag& T);

}  // namespace parker::stagger
