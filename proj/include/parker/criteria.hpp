#pragma once

#include <span>
#include <vector>

#include "parker/profiles.hpp"

namespace parker {

/// A pointwise margin on the interior nodes and whether the criterion holds somewhere.
struct PointwiseCriterion {
  std::vector<double> margin;
  bool holds = false;
};

/// S = g rho^2 / (gamma P) + rho'; holds where S > 0.
PointwiseCriterion schwarzschild_margin(const EquilibriumProfile& prof);
/// (m^2)'; holds where (m^2)' < 0.
PointwiseCriterion buoyancy_margin(const EquilibriumProfile& prof);
/// T = g rho' + g^2 rho^2 / (gamma P + λ m^2); holds where T > 0.
PointwiseCriterion tserkovnikov_margin(const EquilibriumProfile& prof);
/// rho'; holds where rho' > 0.
PointwiseCriterion rt_margin(const EquilibriumProfile& prof);

struct StripBound {
  double varpi = 0.0;
  double bound = 0.0;     // (b - a) varpi / pi
  bool sufficient = false;  // min|m| > bound  =>  stable strip
};

StripBound varpi_and_strip_bound(const EquilibriumProfile& prof, double a, double b);

/// sup over H0^1(a,b) of ||psi|| / ||psi'||, from the smallest Dirichlet eigenvalue
/// of the second-difference operator on n interior nodes.
double poincare_ratio(double a, double b, int n);

/// sqrt of the largest eigenvalue of (∫ W psi^2, ∫ λ m^2 psi'^2); 0 if none positive.
double kappa(const EquilibriumProfile& prof);

/// sqrt of the largest eigenvalue of (∫ W psi^2 - λ m^2 psi'^2, ∫ λ m^2 psi^2); 0 if none positive.
double xi_2d(const EquilibriumProfile& prof);

struct Xi3dResult {
  double value = 0.0;
  /// Largest xi1 at which the reduced form was found positive (lower bracket end).
  double xi1_below = 0.0;
  /// Top eigenvector of the reduced form at xi1_below (empty when value == 0).
  std::vector<double> psi_star;
  int iterations = 0;
};

/// Threshold xi1 below which Q_xi1(psi) = ∫ (W - λ xi1^2 m^2) psi^2 - λ xi1^2 m^2 / (xi1^2 + L2^-2) psi'^2
/// is positive for some psi. Bisection on the sign of the top eigenvalue.
Xi3dResult xi_3d_detail(const EquilibriumProfile& prof, double L2);
double xi_3d(const EquilibriumProfile& prof, double L2);

/// Closed-form per-psi threshold built from chi(psi); 0 when ∫ W psi^2 <= 0.
double xi_3d_of_psi(const EquilibriumProfile& prof, std::span<const double> psi, double L2);

struct CriteriaReport {
  std::vector<double> schwarzschild_margin;
  std::vector<double> buoyancy;
  std::vector<double> tserkovnikov_margin;
  std::vector<double> rt_margin;
  double varpi = 0.0;
  double strip_bound = 0.0;
  bool strip_stable_sufficient = false;
  double kappa = 0.0;
  double xi2d = 0.0;
  double xi3d = 0.0;
  bool schwarzschild = false;
  bool tserkovnikov = false;
  bool rayleigh_taylor = false;
  bool buoyancy_holds = false;
};

CriteriaReport evaluate_criteria(const EquilibriumProfile& prof, double strip_a, double strip_b,
                                 double L2);

/// Nodes where sign(S) != -sign((m^2)') outside a band of band * max magnitude.
int sign_equivalence_violations(const EquilibriumProfile& prof, double band = 1e-8);

}  // namespace parker
