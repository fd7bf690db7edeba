#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "parker/energy.hpp"
#include "parker/profiles.hpp"

namespace parker {

/// Per-mode operators on the interleaved unknowns: phi_j at 3j, theta_j at 3j+1 (cells j = 0..n)
/// and psi_i at 3i+2 (interior nodes i = 0..n-1); size 3n+2.
/// x.Mx is the mass form, x.Dx the dissipation, x.Kx the energy with frequency.
struct ModalOperators {
  Eigen::SparseMatrix<double> mass;
  Eigen::SparseMatrix<double> damping;
  Eigen::SparseMatrix<double> stiffness;
  ModeSpec mode;
  int n = 0;

  int size() const { return 3 * n + 2; }
};

inline int phi_index(int cell) { return 3 * cell; }
inline int theta_index(int cell) { return 3 * cell + 1; }
inline int psi_index(int node) { return 3 * node + 2; }

Eigen::VectorXd pack(const ModalField& f);
ModalField unpack(const Eigen::VectorXd& x, int n, ModeSpec mode);

ModalOperators assemble_operators(const EquilibriumProfile& prof, ModeSpec mode);

enum class GrowthMethod { qep, fixed_point, ivp };
std::string to_string(GrowthMethod m);

struct GrowthResult {
  std::complex<double> lam;
  ModalField field;  // mass-normalized; real part for complex pairs
  GrowthMethod method = GrowthMethod::qep;
  double residual = 0.0;
  bool accepted = true;
  ModeSpec mode;
};

/// Largest dense size for the companion solve; above it only unstable real eigenvalues are found.
inline constexpr int kDenseQepMaxNodes = 256;

/// Eigenpairs of lam^2 M x + lam D x - K x = 0, sorted by descending Re lam.
/// max_pairs > 0 keeps only that many leading pairs (eigenvalues first, vectors by inverse
/// iteration), which is much cheaper than the full set.
/// For n > kDenseQepMaxNodes returns only the positive real eigenvalue found by shift-invert.
std::vector<GrowthResult> solve_qep(const ModalOperators& ops, double tol = 1e-8, int max_pairs = 0);

struct AlphaResult {
  double alpha = 0.0;
  ModalField maximizer;
};

/// Top eigenvalue of (K - s D) x = alpha M x with its mass-normalized eigenvector.
AlphaResult alpha_of_s(const ModalOperators& ops, double s);

/// Positive root of lam^2 = alpha(lam); nullopt when alpha(0) <= 0 (stable mode).
std::optional<GrowthResult> growth_rate_fixed_point(const ModalOperators& ops, double tol = 1e-8);

/// || M^{-1/2} (lam^2 M + lam D - K) x || / ||x||_M.
double qep_residual(std::complex<double> lam, const Eigen::VectorXcd& x, const ModalOperators& ops);
double qep_residual(double lam, const Eigen::VectorXd& x, const ModalOperators& ops);

}  // namespace parker
