#include "parker/stagger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace parker::stagger {

std::vector<double> cell_average(std::span<const double> psi) {
  const std::size_t n = psi.size();
  std::vector<double> out(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double left = j == 0 ? 0.0 : psi[j - 1];
    const double right = j == n ? 0.0 : psi[j];
    out[j] = 0.5 * (left + right);
  }
  return out;
}

std::vector<double> cell_gradient(std::span<const double> psi, double h) {
  const std::size_t n = psi.size();
  std::vector<double> out(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double left = j == 0 ? 0.0 : psi[j - 1];
    const double right = j == n ? 0.0 : psi[j];
    out[j] = (right - left) / h;
  }
  return out;
}

std::vector<double> instability_weight(const EquilibriumProfile& prof) {
  const ProfileSamples& c = prof.cells;
  const double gamma = prof.params.gamma;
  std::vector<double> w(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    w[j] = c.g[j] * c.g[j] * c.rho[j] * c.rho[j] / (gamma * c.pressure[j]) + c.g[j] * c.drho[j];
  }
  return w;
}

std::vector<double> magnetic_weight(const EquilibriumProfile& prof) {
  std::vector<double> w(prof.cells.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = prof.params.lambda * prof.cells.m2[j];
  return w;
}

Eigen::MatrixXd Tridiag::dense() const {
  const auto n = static_cast<Eigen::Index>(diag.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) A(i, i) = diag[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    A(i, i + 1) = off[i];
    A(i + 1, i) = off[i];
  }
  return A;
}

double Tridiag::quadratic(std::span<const double> psi) const {
  double q = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i) q += diag[i] * psi[i] * psi[i];
  for (std::size_t i = 0; i + 1 < diag.size(); ++i) q += 2.0 * off[i] * psi[i] * psi[i + 1];
  return q;
}

Tridiag average_form(std::span<const double> w, double h) {
  const std::size_t n = w.size() - 1;
  Tridiag T;
  T.diag.resize(n);
  T.off.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) T.diag[i] = 0.25 * h * (w[i] + w[i + 1]);
  for (std::size_t i = 0; i + 1 < n; ++i) T.off[i] = 0.25 * h * w[i + 1];
  return T;
}

Tridiag gradient_form(std::span<const double> w, double h) {
  const std::size_t n = w.size() - 1;
  Tridiag T;
  T.diag.resize(n);
  T.off.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) T.diag[i] = (w[i] + w[i + 1]) / h;
  for (std::size_t i = 0; i + 1 < n; ++i) T.off[i] = -w[i + 1] / h;
  return T;
}

Tridiag combine(double a, const Tridiag& A, double b, const Tridiag& B) {
  Tridiag T = A;
  for (std::size_t i = 0; i < T.diag.size(); ++i) T.diag[i] = a * A.diag[i] + b * B.diag[i];
  for (std::size_t i = 0; i < T.off.size(); ++i) T.off[i] = a * A.off[i] + b * B.off[i];
  return T;
}

int count_positive(const Tridiag& T) {
  double scale = 0.0;
  for (double v : T.diag) scale = std::max(scale, std::abs(v));
  for (double v : T.off) scale = std::max(scale, std::abs(v));
  // A vanishing pivot marks a zero eigenvalue; count it as nonpositive.
  const double tiny = std::max(scale, 1.0) * std::numeric_limits<double>::epsilon() * 1e-3;
  int positive = 0;
  double prev = 1.0;
  for (std::size_t i = 0; i < T.diag.size(); ++i) {
    double d = T.diag[i];
    if (i > 0) d -= T.off[i - 1] * T.off[i - 1] / prev;
    if (d == 0.0) d = -tiny;
    if (d > 0.0) ++positive;
    prev = d;
  }
  return positive;
}

}  // namespace parker::stagger
