#include "parker/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <lapacke.h>

#include "parker/error.hpp"

namespace parker {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Sparse linear functional x -> sum a_k x_{idx_k}.
struct Functional {
  int idx[4];
  double val[4];
  int len = 0;

  void add(int i, double v) {
    idx[len] = i;
    val[len] = v;
    ++len;
  }
};

void add_square(Triplets& t, double c, const Functional& a) {
  for (int p = 0; p < a.len; ++p)
    for (int q = 0; q < a.len; ++q) t.emplace_back(a.idx[p], a.idx[q], c * a.val[p] * a.val[q]);
}

void add_cross(Triplets& t, double c, const Functional& a, const Functional& b) {
  for (int p = 0; p < a.len; ++p)
    for (int q = 0; q < b.len; ++q) {
      const double v = 0.5 * c * a.val[p] * b.val[q];
      t.emplace_back(a.idx[p], b.idx[q], v);
      t.emplace_back(b.idx[q], a.idx[p], v);
    }
}

Eigen::SparseMatrix<double> build(int N, const Triplets& t) {
  Eigen::SparseMatrix<double> A(N, N);
  A.setFromTriplets(t.begin(), t.end());
  Eigen::SparseMatrix<double> At = A.transpose();
  Eigen::SparseMatrix<double> S = 0.5 * (A + At);
  S.makeCompressed();
  return S;
}

Eigen::VectorXd inv_sqrt_mass(const ModalOperators& ops) {
  return ops.mass.diagonal().cwiseSqrt().cwiseInverse();
}

Eigen::MatrixXd scaled_dense(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& s) {
  Eigen::MatrixXd out = Eigen::MatrixXd(A);
  return s.asDiagonal() * out * s.asDiagonal();
}

Eigen::SparseMatrix<double> pencil(const ModalOperators& ops, double s) {
  Eigen::SparseMatrix<double> Q = (s * s) * ops.mass + s * ops.damping - ops.stiffness;
  Q.makeCompressed();
  return Q;
}

// True when s^2 M + s D - K is positive definite (all LDL^T pivots positive).
bool pencil_positive(const ModalOperators& ops, double s, double shift = 0.0) {
  Eigen::SparseMatrix<double> Q = pencil(ops, s);
  if (shift != 0.0) Q += shift * ops.mass;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::NaturalOrdering<int>> ldlt(Q);
  if (ldlt.info() != Eigen::Success) return false;
  const Eigen::VectorXd d = ldlt.vectorD();
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!(d(i) > 0.0)) return false;
  return true;
}

// Largest |K_ii| / M_ii, the stiffness scale used for relative thresholds.
double stiffness_scale(const ModalOperators& ops) {
  double s = 0.0;
  for (int i = 0; i < ops.size(); ++i) {
    s = std::max(s, std::abs(ops.stiffness.coeff(i, i)) / ops.mass.coeff(i, i));
  }
  return s;
}

double rayleigh_functional(const ModalOperators& ops, const Eigen::VectorXd& x) {
  const double m = x.dot(ops.mass * x);
  const double d = x.dot(ops.damping * x);
  const double k = x.dot(ops.stiffness * x);
  const double disc = d * d + 4.0 * m * k;
  if (k <= 0.0 || disc < 0.0) return 0.0;
  return (std::sqrt(disc) - d) / (2.0 * m);
}

// Real mass-normalized representative of a complex eigenvector.
Eigen::VectorXd realify(const Eigen::VectorXcd& z, const Eigen::VectorXd& mass) {
  Eigen::Index k = 0;
  z.cwiseAbs().maxCoeff(&k);
  const std::complex<double> phase = std::abs(z(k)) > 0.0 ? z(k) / std::abs(z(k)) : 1.0;
  Eigen::VectorXd x = (z / phase).real();
  const double norm = std::sqrt(x.dot(mass.asDiagonal() * x));
  if (norm > 0.0) x /= norm;
  return x;
}

// Root of x^H Q(lam) x = 0 closest to the current estimate.
std::complex<double> rayleigh_root(const ModalOperators& ops, const Eigen::VectorXcd& x,
                                   std::complex<double> near) {
  auto form = [&](const Eigen::SparseMatrix<double>& A) {
    return x.real().dot(A * x.real()) + x.imag().dot(A * x.imag());
  };
  const double m = form(ops.mass), d = form(ops.damping), k = form(ops.stiffness);
  const std::complex<double> root = std::sqrt(std::complex<double>(d * d + 4.0 * m * k, 0.0));
  const std::complex<double> a = (-d + root) / (2.0 * m), b = (-d - root) / (2.0 * m);
  return std::abs(a - near) <= std::abs(b - near) ? a : b;
}

struct Eigenpair {
  std::complex<double> lam;
  Eigen::VectorXcd x;
};

// Inverse iteration on the complex pencil near a known eigenvalue, with Rayleigh-functional
// updates while they keep the value close.
Eigenpair refine_pair(const ModalOperators& ops, std::complex<double> lam) {
  using SpC = Eigen::SparseMatrix<std::complex<double>>;
  const SpC M = ops.mass.cast<std::complex<double>>();
  const SpC D = ops.damping.cast<std::complex<double>>();
  const SpC K = ops.stiffness.cast<std::complex<double>>();
  const Eigen::VectorXcd mass = ops.mass.diagonal().cast<std::complex<double>>();
  const double scale = std::max(1.0, std::abs(lam));
  Eigen::VectorXcd x = Eigen::VectorXcd::Ones(ops.size());
  std::complex<double> shift = lam + 1e-10 * scale;
  for (int it = 0; it < 4; ++it) {
    SpC Q = (shift * shift) * M + shift * D - K;
    Q.makeCompressed();
    Eigen::SparseLU<SpC> lu(Q);
    if (lu.info() != Eigen::Success) break;
    Eigen::VectorXcd y = lu.solve(mass.asDiagonal() * x);
    if (!y.allFinite() || y.norm() == 0.0) break;
    x = y / y.norm();
    const std::complex<double> next = rayleigh_root(ops, x, lam);
    // keep the iteration pinned to the requested eigenvalue
    if (std::abs(next - lam) > 1e-6 * scale) break;
    lam = next;
    shift = lam + 1e-13 * scale;
  }
  return {lam, x};
}

std::vector<GrowthResult> leading_pairs(const ModalOperators& ops, const Eigen::VectorXd& wr,
                                        const Eigen::VectorXd& wi, double tol, int max_pairs) {
  std::vector<int> order(wr.size());
  for (int k = 0; k < wr.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (wr(a) != wr(b)) return wr(a) > wr(b);
    return wi(a) > wi(b);
  });
  const Eigen::VectorXd mass = ops.mass.diagonal();
  std::vector<GrowthResult> out;
  for (int k = 0; k < std::min<int>(max_pairs, order.size()); ++k) {
    const auto [lam, x] = refine_pair(ops, {wr(order[k]), wi(order[k])});
    GrowthResult r;
    r.lam = lam;
    r.method = GrowthMethod::qep;
    r.mode = ops.mode;
    r.residual = qep_residual(lam, x, ops);
    r.accepted = r.residual <= tol;
    r.field = unpack(realify(x, mass), ops.n, ops.mode);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<GrowthResult> solve_qep_dense(const ModalOperators& ops, double tol, int max_pairs) {
  const int N = ops.size();
  const Eigen::VectorXd s = inv_sqrt_mass(ops);
  const Eigen::MatrixXd Kt = scaled_dense(ops.stiffness, s);
  const Eigen::MatrixXd Dt = scaled_dense(ops.damping, s);

  // Column-major companion [[0, I], [Kt, -Dt]] acting on (y, lam y).
  const int N2 = 2 * N;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N2, N2);
  C.topRightCorner(N, N).setIdentity();
  C.bottomLeftCorner(N, N) = Kt;
  C.bottomRightCorner(N, N) = -Dt;
  Eigen::VectorXd wr(N2), wi(N2);
  if (max_pairs > 0) {
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', N2, C.data(), N2, wr.data(),
                                          wi.data(), nullptr, 1, nullptr, 1);
    if (info != 0) fail(Errc::EigenFailure, "companion eigensolve did not converge");
    return leading_pairs(ops, wr, wi, tol, max_pairs);
  }
  Eigen::MatrixXd V(N2, N2);
  const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', N2, C.data(), N2, wr.data(),
                                        wi.data(), nullptr, 1, V.data(), N2);
  if (info != 0) fail(Errc::EigenFailure, "companion eigensolve did not converge");

  const Eigen::VectorXd mass = ops.mass.diagonal();
  std::vector<GrowthResult> out;
  out.reserve(N2);
  for (int k = 0; k < N2; ++k) {
    // dgeev packs a conjugate pair as columns (re, im) at k, k+1.
    const std::complex<double> lam(wr(k), wi(k));
    Eigen::VectorXcd z(N);
    if (wi(k) == 0.0) {
      z = V.col(k).head(N).cast<std::complex<double>>();
    } else if (wi(k) > 0.0) {
      z = V.col(k).head(N).cast<std::complex<double>>() +
          std::complex<double>(0.0, 1.0) * V.col(k + 1).head(N).cast<std::complex<double>>();
    } else {
      z = V.col(k - 1).head(N).cast<std::complex<double>>() -
          std::complex<double>(0.0, 1.0) * V.col(k).head(N).cast<std::complex<double>>();
    }
    Eigen::VectorXcd x = s.asDiagonal() * z;
    GrowthResult r;
    r.lam = lam;
    r.method = GrowthMethod::qep;
    r.mode = ops.mode;
    r.residual = qep_residual(lam, x, ops);
    r.accepted = r.residual <= tol;
    r.field = unpack(realify(x, mass), ops.n, ops.mode);
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const GrowthResult& a, const GrowthResult& b) {
    if (a.lam.real() != b.lam.real()) return a.lam.real() > b.lam.real();
    return a.lam.imag() > b.lam.imag();
  });
  return out;
}

// Top positive real eigenvalue for large grids: inverse iteration at an upper shift, then
// Rayleigh-functional iteration.
std::vector<GrowthResult> solve_qep_shift_invert(const ModalOperators& ops, double tol) {
  const double scale = stiffness_scale(ops);
  if (pencil_positive(ops, 0.0, 1e-12 * scale)) return {};
  double hi = 1.0;
  for (int k = 0; !pencil_positive(ops, hi); ++k) {
    if (k > 60) fail(Errc::BracketFailure, "no upper shift makes the pencil definite");
    hi *= 2.0;
  }
  const int N = ops.size();
  Eigen::VectorXd x = Eigen::VectorXd::Ones(N);
  {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(pencil(ops, hi));
    for (int it = 0; it < 30; ++it) {
      x = ldlt.solve(ops.mass * x);
      x /= std::sqrt(x.dot(ops.mass * x));
    }
  }
  double lam = rayleigh_functional(ops, x);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  for (int it = 0; it < 50; ++it) {
    lu.compute(pencil(ops, lam));
    if (lu.info() != Eigen::Success) break;  // singular pencil: lam is an eigenvalue
    Eigen::VectorXd y = lu.solve(ops.mass * x);
    if (!y.allFinite()) break;
    x = y / std::sqrt(y.dot(ops.mass * y));
    const double next = rayleigh_functional(ops, x);
    const bool done = std::abs(next - lam) <= 1e-14 * std::max(1.0, lam);
    lam = next;
    if (done) break;
  }
  GrowthResult r;
  r.lam = lam;
  r.method = GrowthMethod::qep;
  r.mode = ops.mode;
  r.residual = qep_residual(lam, x, ops);
  r.accepted = r.residual <= tol && lam > 0.0;
  r.field = unpack(x, ops.n, ops.mode);
  return {r};
}

}  // namespace

Eigen::VectorXd pack(const ModalField& f) {
  const int n = static_cast<int>(f.psi.size());
  Eigen::VectorXd x(3 * n + 2);
  for (int c = 0; c <= n; ++c) {
    x(phi_index(c)) = f.phi[c];
    x(theta_index(c)) = f.theta[c];
  }
  for (int i = 0; i < n; ++i) x(psi_index(i)) = f.psi[i];
  return x;
}

ModalField unpack(const Eigen::VectorXd& x, int n, ModeSpec mode) {
  if (x.size() != 3 * n + 2) fail(Errc::InvalidArgument, "stacked vector has the wrong size");
  ModalField f = ModalField::zeros(n, mode);
  for (int c = 0; c <= n; ++c) {
    f.phi[c] = x(phi_index(c));
    f.theta[c] = x(theta_index(c));
  }
  for (int i = 0; i < n; ++i) f.psi[i] = x(psi_index(i));
  return f;
}

std::string to_string(GrowthMethod m) {
  switch (m) {
    case GrowthMethod::qep: return "qep";
    case GrowthMethod::fixed_point: return "fixed_point";
    case GrowthMethod::ivp: return "ivp";
  }
  return "?";
}

ModalOperators assemble_operators(const EquilibriumProfile& prof, ModeSpec mode) {
  const int n = prof.grid.n;
  const double h = prof.grid.h;
  const auto& cs = prof.cells;
  const PhysicalParams& p = prof.params;
  const double x1 = mode.xi1, x2 = mode.xi2, k2 = mode.norm2();
  const double mu1 = p.mu1, mu2 = p.mu2();

  ModalOperators ops;
  ops.mode = mode;
  ops.n = n;
  const int N = ops.size();
  Triplets tm, td, tk;

  for (int c = 0; c <= n; ++c) {
    Functional phi, theta, psi_bar, dpsi, div, vert;
    phi.add(phi_index(c), 1.0);
    theta.add(theta_index(c), 1.0);
    if (c > 0) {
      psi_bar.add(psi_index(c - 1), 0.5);
      dpsi.add(psi_index(c - 1), -1.0 / h);
    }
    if (c < n) {
      psi_bar.add(psi_index(c), 0.5);
      dpsi.add(psi_index(c), 1.0 / h);
    }
    div = dpsi;
    div.add(phi_index(c), x1);
    div.add(theta_index(c), x2);
    vert = dpsi;
    vert.add(theta_index(c), x2);

    const double g = cs.g[c];
    const double lm2 = p.lambda * cs.m2[c];
    add_square(tk, h * g * cs.drho[c], psi_bar);
    add_cross(tk, 2.0 * h * g * cs.rho[c], psi_bar, div);
    add_square(tk, -h * p.gamma * cs.pressure[c], div);
    add_square(tk, -h * lm2 * x1 * x1, theta);
    add_square(tk, -h * lm2 * x1 * x1, psi_bar);
    add_square(tk, -h * lm2, vert);

    add_square(td, h * mu1 * k2, phi);
    add_square(td, h * mu1 * k2, theta);
    add_square(td, h * mu1, dpsi);
    add_square(td, h * mu2, div);

    tm.emplace_back(phi_index(c), phi_index(c), h * cs.rho[c]);
    tm.emplace_back(theta_index(c), theta_index(c), h * cs.rho[c]);
  }
  for (int i = 0; i < n; ++i) {
    Functional psi, dphi, dtheta;
    psi.add(psi_index(i), 1.0);
    dphi.add(phi_index(i), -1.0 / h);
    dphi.add(phi_index(i + 1), 1.0 / h);
    dtheta.add(theta_index(i), -1.0 / h);
    dtheta.add(theta_index(i + 1), 1.0 / h);
    add_square(td, h * mu1 * k2, psi);
    add_square(td, h * mu1, dphi);
    add_square(td, h * mu1, dtheta);
    tm.emplace_back(psi_index(i), psi_index(i), h * prof.nodes.rho[i]);
  }
  for (int c : {0, n}) {
    td.emplace_back(phi_index(c), phi_index(c), 2.0 * mu1 / h);
    td.emplace_back(theta_index(c), theta_index(c), 2.0 * mu1 / h);
  }

  ops.mass = build(N, tm);
  ops.damping = build(N, td);
  ops.stiffness = build(N, tk);
  return ops;
}

std::vector<GrowthResult> solve_qep(const ModalOperators& ops, double tol, int max_pairs) {
  if (ops.n <= kDenseQepMaxNodes) return solve_qep_dense(ops, tol, max_pairs);
  return solve_qep_shift_invert(ops, tol);
}

AlphaResult alpha_of_s(const ModalOperators& ops, double s) {
  const Eigen::VectorXd sc = inv_sqrt_mass(ops);
  Eigen::SparseMatrix<double> A = ops.stiffness - s * ops.damping;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled_dense(A, sc));
  if (es.info() != Eigen::Success) fail(Errc::EigenFailure, "alpha eigensolve failed");
  const int last = ops.size() - 1;
  AlphaResult out;
  out.alpha = es.eigenvalues()(last);
  const Eigen::VectorXd x = sc.asDiagonal() * es.eigenvectors().col(last);
  out.maximizer = unpack(x, ops.n, ops.mode);
  return out;
}

std::optional<GrowthResult> growth_rate_fixed_point(const ModalOperators& ops, double tol) {
  // Phi(s) = s^2 - alpha(s) > 0 exactly when s^2 M + s D - K is positive definite.
  const double scale = stiffness_scale(ops);
  if (pencil_positive(ops, 0.0, 1e-12 * scale)) return std::nullopt;

  double lo = 0.0, hi = 1.0;
  for (int k = 0; !pencil_positive(ops, hi); ++k) {
    if (k > 60) fail(Errc::BracketFailure, "upper bracket never made Phi positive");
    lo = hi;
    hi *= 2.0;
  }
  const double rel = 0.01 * tol;
  for (int it = 0; it < 200 && hi - lo > rel * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pencil_positive(ops, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double lam = 0.5 * (lo + hi);
  AlphaResult top = alpha_of_s(ops, lam);
  const double alpha0 = alpha_of_s(ops, 0.0).alpha;
  if (alpha0 < top.alpha - 1e-9 * std::abs(alpha0)) {
    fail(Errc::BracketFailure, "alpha increased with s; damping is not semidefinite");
  }
  GrowthResult r;
  r.lam = lam;
  r.method = GrowthMethod::fixed_point;
  r.mode = ops.mode;
  r.field = std::move(top.maximizer);
  r.residual = qep_residual(lam, pack(r.field), ops);
  r.accepted = std::abs(lam * lam - top.alpha) <= tol * std::max(lam * lam, 1e-300) * 100.0;
  return r;
}

double qep_residual(std::complex<double> lam, const Eigen::VectorXcd& x, const ModalOperators& ops) {
  const Eigen::VectorXd mass = ops.mass.diagonal();
  const double xnorm = std::sqrt((x.cwiseAbs2().array() * mass.array()).sum());
  if (!(xnorm > 0.0)) fail(Errc::ZeroVector, "residual of a zero vector");
  auto apply = [&](const Eigen::SparseMatrix<double>& A) -> Eigen::VectorXcd {
    const Eigen::VectorXd re = A * x.real();
    const Eigen::VectorXd im = A * x.imag();
    Eigen::VectorXcd out(x.size());
    out.real() = re;
    out.imag() = im;
    return out;
  };
  const Eigen::VectorXcd r = (lam * lam) * apply(ops.mass) + lam * apply(ops.damping) - apply(ops.stiffness);
  const double rnorm = std::sqrt((r.cwiseAbs2().array() / mass.array()).sum());
  return rnorm / xnorm;
}

double qep_residual(double lam, const Eigen::VectorXd& x, const ModalOperators& ops) {
  return qep_residual(std::complex<double>(lam, 0.0), x.cast<std::complex<double>>(), ops);
}

}  // namespace parker
