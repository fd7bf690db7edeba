#include "parker/criteria.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "parker/error.hpp"
#include "parker/stagger.hpp"

namespace parker {

namespace {

struct TopEigen {
  double value;
  Eigen::VectorXd vector;
};

TopEigen largest_generalized(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, bool want_vector) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      A, B, want_vector ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(Errc::EigenFailure, "generalized symmetric eigensolve failed");
  const Eigen::Index last = A.rows() - 1;
  TopEigen out{es.eigenvalues()(last), {}};
  if (want_vector) out.vector = es.eigenvectors().col(last);
  return out;
}

void require_field(const EquilibriumProfile& prof) {
  const auto& m2 = prof.cells.m2;
  if (*std::min_element(m2.begin(), m2.end()) <= 0.0) {
    fail(Errc::DegenerateField, "m^2 must be positive on every cell");
  }
}

}  // namespace

PointwiseCriterion schwarzschild_margin(const EquilibriumProfile& prof) {
  const ProfileSamples& s = prof.nodes;
  PointwiseCriterion out;
  out.margin.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.margin[i] = s.g[i] * s.rho[i] * s.rho[i] / (prof.params.gamma * s.pressure[i]) + s.drho[i];
  }
  out.holds = std::any_of(out.margin.begin(), out.margin.end(), [](double v) { return v > 0.0; });
  return out;
}

PointwiseCriterion buoyancy_margin(const EquilibriumProfile& prof) {
  PointwiseCriterion out;
  out.margin = prof.nodes.m2prime;
  out.holds = std::any_of(out.margin.begin(), out.margin.end(), [](double v) { return v < 0.0; });
  return out;
}

PointwiseCriterion tserkovnikov_margin(const EquilibriumProfile& prof) {
  const ProfileSamples& s = prof.nodes;
  const PhysicalParams& p = prof.params;
  PointwiseCriterion out;
  out.margin.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double g = s.g[i];
    out.margin[i] = g * s.drho[i] +
                    g * g * s.rho[i] * s.rho[i] / (p.gamma * s.pressure[i] + p.lambda * s.m2[i]);
  }
  out.holds = std::any_of(out.margin.begin(), out.margin.end(), [](double v) { return v > 0.0; });
  return out;
}

PointwiseCriterion rt_margin(const EquilibriumProfile& prof) {
  PointwiseCriterion out;
  out.margin = prof.nodes.drho;
  out.holds = std::any_of(out.margin.begin(), out.margin.end(), [](double v) { return v > 0.0; });
  return out;
}

StripBound varpi_and_strip_bound(const EquilibriumProfile& prof, double a, double b) {
  if (!(a < b)) fail(Errc::DegenerateInterval, "strip requires a < b");
  const ProfileSamples& s = prof.nodes;
  double peak = 0.0;
  double min_m = INFINITY;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double g = s.g[i];
    const double w = g * s.drho[i] + g * g * s.rho[i] * s.rho[i] / (prof.params.gamma * s.pressure[i]);
    peak = std::max(peak, std::abs(w));
    min_m = std::min(min_m, std::abs(s.m[i]));
  }
  StripBound out;
  out.varpi = std::sqrt(peak / prof.params.lambda);
  out.bound = (b - a) * out.varpi / std::numbers::pi;
  out.sufficient = min_m > out.bound;
  return out;
}

double poincare_ratio(double a, double b, int n) {
  if (!(a < b)) fail(Errc::DegenerateInterval, "poincare_ratio requires a < b");
  if (n < 8) fail(Errc::InvalidArgument, "poincare_ratio requires n >= 8");
  const double h = (b - a) / (n + 1);
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(n, 2.0 / (h * h));
  Eigen::VectorXd sub = Eigen::VectorXd::Constant(n - 1, -1.0 / (h * h));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(Errc::EigenFailure, "tridiagonal eigensolve failed");
  return 1.0 / std::sqrt(es.eigenvalues()(0));
}

double kappa(const EquilibriumProfile& prof) {
  require_field(prof);
  const double h = prof.grid.h;
  const auto N = stagger::average_form(stagger::instability_weight(prof), h);
  const auto G = stagger::gradient_form(stagger::magnetic_weight(prof), h);
  if (stagger::count_positive(N) == 0) return 0.0;
  return std::sqrt(std::max(0.0, largest_generalized(N.dense(), G.dense(), false).value));
}

double xi_2d(const EquilibriumProfile& prof) {
  require_field(prof);
  const double h = prof.grid.h;
  const auto lm2 = stagger::magnetic_weight(prof);
  const auto N = stagger::average_form(stagger::instability_weight(prof), h);
  const auto G = stagger::gradient_form(lm2, h);
  const auto B = stagger::average_form(lm2, h);
  const auto numerator = stagger::combine(1.0, N, -1.0, G);
  if (stagger::count_positive(numerator) == 0) return 0.0;
  return std::sqrt(std::max(0.0, largest_generalized(numerator.dense(), B.dense(), false).value));
}

Xi3dResult xi_3d_detail(const EquilibriumProfile& prof, double L2) {
  require_field(prof);
  if (!(L2 > 0.0)) fail(Errc::InvalidArgument, "L2 must be positive");
  const double h = prof.grid.h;
  const double k = 1.0 / (L2 * L2);
  const auto W = stagger::instability_weight(prof);
  const auto lm2 = stagger::magnetic_weight(prof);
  const auto N = stagger::average_form(W, h);
  const auto B = stagger::average_form(lm2, h);
  const auto G = stagger::gradient_form(lm2, h);

  auto reduced = [&](double xi1) {
    const double x = xi1 * xi1;
    auto Q = stagger::combine(1.0, N, -x, B);
    return stagger::combine(1.0, Q, -x / (x + k), G);
  };

  Xi3dResult out;
  if (stagger::count_positive(N) == 0) return out;

  // Q_xi1 <= ∫ (W - λ xi1^2 m^2) psibar^2, negative once xi1^2 exceeds max W / λ m^2.
  double ratio = 0.0;
  for (std::size_t j = 0; j < W.size(); ++j) ratio = std::max(ratio, W[j] / lm2[j]);
  double lo = 0.0;
  double hi = std::sqrt(ratio) * (1.0 + 1e-9) + 1e-300;
  if (stagger::count_positive(reduced(hi)) != 0) {
    fail(Errc::BisectionFailure, "upper bracket still admits a positive reduced form");
  }
  constexpr int kMaxIterations = 48;
  constexpr double kRelTol = 1e-8;
  for (out.iterations = 0; out.iterations < kMaxIterations; ++out.iterations) {
    if (hi - lo <= kRelTol * hi) break;
    const double mid = 0.5 * (lo + hi);
    if (stagger::count_positive(reduced(mid)) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.value = 0.5 * (lo + hi);
  out.xi1_below = lo;

  const auto Q = reduced(lo).dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  if (es.info() != Eigen::Success) fail(Errc::EigenFailure, "reduced-form eigensolve failed");
  const Eigen::VectorXd v = es.eigenvectors().col(Q.rows() - 1);
  out.psi_star.assign(v.data(), v.data() + v.size());
  return out;
}

double xi_3d(const EquilibriumProfile& prof, double L2) { return xi_3d_detail(prof, L2).value; }

double xi_3d_of_psi(const EquilibriumProfile& prof, std::span<const double> psi, double L2) {
  if (psi.size() != static_cast<std::size_t>(prof.grid.n)) {
    fail(Errc::InvalidArgument, "psi must live on the interior nodes");
  }
  if (!(L2 > 0.0)) fail(Errc::InvalidArgument, "L2 must be positive");
  const double h = prof.grid.h;
  const double k = 1.0 / (L2 * L2);
  const auto W = stagger::instability_weight(prof);
  const auto lm2 = stagger::magnetic_weight(prof);
  const auto avg = stagger::cell_average(psi);
  const auto grad = stagger::cell_gradient(psi, h);
  double a = 0.0, b = 0.0, c = 0.0;
  for (std::size_t j = 0; j < avg.size(); ++j) {
    a += h * lm2[j] * avg[j] * avg[j];
    b += h * lm2[j] * grad[j] * grad[j];
    c += h * W[j] * avg[j] * avg[j];
  }
  if (a == 0.0) fail(Errc::ZeroDenominator, "∫ λ m^2 psi^2 vanishes");
  if (c <= 0.0) return 0.0;
  const double chi = b + k * a - c;
  const double root = (std::sqrt(chi * chi + 4.0 * k * a * c) - chi) / (2.0 * a);
  return root > 0.0 ? std::sqrt(root) : 0.0;
}

CriteriaReport evaluate_criteria(const EquilibriumProfile& prof, double strip_a, double strip_b,
                                 double L2) {
  CriteriaReport r;
  auto s = schwarzschild_margin(prof);
  auto bm = buoyancy_margin(prof);
  auto t = tserkovnikov_margin(prof);
  auto rt = rt_margin(prof);
  r.schwarzschild_margin = std::move(s.margin);
  r.schwarzschild = s.holds;
  r.buoyancy = std::move(bm.margin);
  r.buoyancy_holds = bm.holds;
  r.tserkovnikov_margin = std::move(t.margin);
  r.tserkovnikov = t.holds;
  r.rt_margin = std::move(rt.margin);
  r.rayleigh_taylor = rt.holds;
  const StripBound sb = varpi_and_strip_bound(prof, strip_a, strip_b);
  r.varpi = sb.varpi;
  r.strip_bound = sb.bound;
  r.strip_stable_sufficient = sb.sufficient;
  r.kappa = kappa(prof);
  r.xi2d = xi_2d(prof);
  r.xi3d = xi_3d(prof, L2);
  return r;
}

int sign_equivalence_violations(const EquilibriumProfile& prof, double band) {
  const auto S = schwarzschild_margin(prof).margin;
  const ProfileSamples& s = prof.nodes;
  const PhysicalParams& p = prof.params;
  // -(λ rho / (2 gamma P)) (m^2)' is S in the same units; compare signs outside the band.
  double scale = 0.0;
  std::vector<double> B(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) {
    B[i] = -p.lambda * s.rho[i] / (2.0 * p.gamma * s.pressure[i]) * s.m2prime[i];
    scale = std::max({scale, std::abs(S[i]), std::abs(B[i])});
  }
  int bad = 0;
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (std::max(std::abs(S[i]), std::abs(B[i])) <= band * scale) continue;
    if ((S[i] > 0.0) != (B[i] > 0.0) || (S[i] == 0.0) != (B[i] == 0.0)) ++bad;
  }
  return bad;
}

}  // namespace parker
