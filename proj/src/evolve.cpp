#include "parker/evolve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "parker/error.hpp"
#include "parker/report.hpp"

namespace parker {

namespace {

using cd = std::complex<double>;
using CArr = Eigen::ArrayXcd;
constexpr cd I(0.0, 1.0);

// d/dx: central inside, second-order one-sided at the walls.
CArr ddx(const CArr& f, double h) {
  const Eigen::Index N = f.size();
  CArr d(N);
  d(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
  d(N - 1) = (3.0 * f(N - 1) - 4.0 * f(N - 2) + f(N - 3)) / (2.0 * h);
  d.segment(1, N - 2) = (f.tail(N - 2) - f.head(N - 2)) / (2.0 * h);
  return d;
}

// d^2/dx^2 inside; walls left at zero (velocity is pinned there).
CArr d2dx2(const CArr& f, double h) {
  const Eigen::Index N = f.size();
  CArr d = CArr::Zero(N);
  d.segment(1, N - 2) = (f.tail(N - 2) - 2.0 * f.segment(1, N - 2) + f.head(N - 2)) / (h * h);
  return d;
}

struct State {
  CArr rho, v[3], N[3];

  State operator+(const State& o) const {
    State s;
    s.rho = rho + o.rho;
    for (int k = 0; k < 3; ++k) {
      s.v[k] = v[k] + o.v[k];
      s.N[k] = N[k] + o.N[k];
    }
    return s;
  }
  State operator*(double a) const {
    State s;
    s.rho = a * rho;
    for (int k = 0; k < 3; ++k) {
      s.v[k] = a * v[k];
      s.N[k] = a * N[k];
    }
    return s;
  }
};

CArr to_array(const ModeState::CVec& v) {
  return Eigen::Map<const Eigen::ArrayXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

ModeState::CVec to_vector(const CArr& a) { return ModeState::CVec(a.data(), a.data() + a.size()); }

State from_mode_state(const ModeState& m) {
  State s;
  s.rho = to_array(m.rho_hat);
  for (int k = 0; k < 3; ++k) {
    s.v[k] = to_array(m.v_hat[k]);
    s.N[k] = to_array(m.N_hat[k]);
  }
  return s;
}

ModeState to_mode_state(const State& s, double t) {
  ModeState m;
  m.rho_hat = to_vector(s.rho);
  for (int k = 0; k < 3; ++k) {
    m.v_hat[k] = to_vector(s.v[k]);
    m.N_hat[k] = to_vector(s.N[k]);
  }
  m.t = t;
  return m;
}

struct Coefficients {
  Eigen::ArrayXd rho, c2, m, dm, g;
  double h, lambda, mu1, mu2;
  cd ik1, ik2;
  double k2;
};

Coefficients coefficients(const EquilibriumProfile& prof, ModeSpec mode) {
  const ProfileSamples& s = prof.closed;
  const auto map = [](const std::vector<double>& v) {
    return Eigen::Map<const Eigen::ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  };
  Coefficients c;
  c.rho = map(s.rho);
  c.c2 = prof.params.gamma * map(s.pressure) / c.rho;
  c.m = map(s.m);
  c.dm = map(s.dm);
  c.g = map(s.g);
  c.h = prof.grid.h;
  c.lambda = prof.params.lambda;
  c.mu1 = prof.params.mu1;
  c.mu2 = prof.params.mu2();
  c.ik1 = I * mode.xi1;
  c.ik2 = I * mode.xi2;
  c.k2 = mode.norm2();
  return c;
}

State rhs(const State& s, const Coefficients& c) {
  const double h = c.h;
  const Eigen::Index N = s.rho.size();
  State d;
  d.rho = -(c.rho * (c.ik1 * s.v[0] + c.ik2 * s.v[1]) + ddx(c.rho * s.v[2], h));

  const CArr Pi = c.c2 * s.rho + c.lambda * c.m * s.N[0];
  const CArr div = c.ik1 * s.v[0] + c.ik2 * s.v[1] + ddx(s.v[2], h);
  auto lap = [&](const CArr& f) -> CArr { return -c.k2 * f + d2dx2(f, h); };

  CArr f0 = -c.ik1 * Pi + c.mu1 * lap(s.v[0]) + c.mu2 * c.ik1 * div + c.lambda * c.dm * s.N[2] +
            c.lambda * c.m * c.ik1 * s.N[0];
  CArr f1 = -c.ik2 * Pi + c.mu1 * lap(s.v[1]) + c.mu2 * c.ik2 * div + c.lambda * c.m * c.ik1 * s.N[1];
  CArr f2 = -ddx(Pi, h) + c.mu1 * lap(s.v[2]) + c.mu2 * ddx(div, h) + c.lambda * c.m * c.ik1 * s.N[2] -
            c.g * s.rho;
  for (CArr* f : {&f0, &f1, &f2}) {
    *f /= c.rho;
    (*f)(0) = 0.0;
    (*f)(N - 1) = 0.0;
  }
  d.v[0] = std::move(f0);
  d.v[1] = std::move(f1);
  d.v[2] = std::move(f2);

  // v3 m' is written as (m v3)' - m v3' so the discrete div N is conserved exactly.
  d.N[0] = -(c.ik2 * c.m * s.v[1] + ddx(c.m * s.v[2], h));
  d.N[1] = c.ik1 * c.m * s.v[1];
  d.N[2] = c.ik1 * c.m * s.v[2];
  return d;
}

double v_norm(const State& s, const Coefficients& c) {
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) sum += (c.rho * s.v[k].abs2()).sum();
  return std::sqrt(sum * c.h);
}

CArr div_N(const State& s, const Coefficients& c) {
  return c.ik1 * s.N[0] + c.ik2 * s.N[1] + ddx(s.N[2], c.h);
}

double max_abs_N(const State& s) {
  double m = 0.0;
  for (int k = 0; k < 3; ++k) m = std::max(m, s.N[k].abs().maxCoeff());
  return m;
}

// Upper bound on any physical growth rate: sqrt(max W / rho), W = g^2 rho^2/(gamma P) + g rho'.
double growth_bound(const EquilibriumProfile& prof) {
  const ProfileSamples& s = prof.closed;
  double peak = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double g = s.g[i];
    const double W = g * g * s.rho[i] * s.rho[i] / (prof.params.gamma * s.pressure[i]) + g * s.drho[i];
    peak = std::max(peak, std::abs(W) / s.rho[i]);
  }
  return std::sqrt(peak);
}

void check_state(const ModeState& s, const EquilibriumProfile& prof) {
  const std::size_t N = prof.grid.n + 2;
  bool ok = s.rho_hat.size() == N;
  for (int k = 0; k < 3; ++k) ok = ok && s.v_hat[k].size() == N && s.N_hat[k].size() == N;
  if (!ok) fail(Errc::InvalidArgument, "state does not match the closed node set");
}

}  // namespace

ModeState ModeState::zeros(int closed_points) {
  ModeState s;
  s.rho_hat.assign(closed_points, 0.0);
  for (int k = 0; k < 3; ++k) {
    s.v_hat[k].assign(closed_points, 0.0);
    s.N_hat[k].assign(closed_points, 0.0);
  }
  return s;
}

double default_time_step(const EquilibriumProfile& prof, ModeSpec mode) {
  const ProfileSamples& s = prof.closed;
  const PhysicalParams& p = prof.params;
  const double h = prof.grid.h;
  double rho_min = INFINITY, fast2 = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    rho_min = std::min(rho_min, s.rho[i]);
    fast2 = std::max(fast2, (p.gamma * s.pressure[i] + p.lambda * s.m2[i]) / s.rho[i]);
  }
  const double nu_max = (p.mu1 + p.mu2()) / rho_min;
  const double viscous = nu_max > 0.0 ? 0.2 * h * h / nu_max : INFINITY;
  const double wave = 0.5 * h / (std::sqrt(fast2) * (1.0 + 0.5 * h * std::sqrt(mode.norm2())));
  return std::min(viscous, wave);
}

Trajectory evolve_mode(const EquilibriumProfile& prof, ModeSpec mode, const ModeState& init,
                       double t_end, double dt, const EvolveOptions& opts) {
  check_state(init, prof);
  if (!(dt > 0.0)) fail(Errc::InvalidArgument, "dt must be positive");
  if (!(t_end > init.t)) fail(Errc::InvalidArgument, "t_end must exceed the initial time");
  if (opts.samples < 2) fail(Errc::InvalidArgument, "need at least two samples");
  if (dt > 2.0 * default_time_step(prof, mode)) {
    fail(Errc::StepTooLarge, "dt exceeds the explicit stability limit");
  }

  const Coefficients c = coefficients(prof, mode);
  State s = from_mode_state(init);
  const CArr div0 = div_N(s, c);
  const long steps = std::max<long>(1, static_cast<long>(std::ceil((t_end - init.t) / dt)));
  const double step = (t_end - init.t) / steps;
  // Physical growth is bounded by the buoyancy rate; transient exchange between kinetic and
  // wave energy by the fastest wave frequency.
  const double dt_wave = default_time_step(prof, mode);
  const double guard = 10.0 * (growth_bound(prof) + 1.0 / dt_wave) + 10.0;

  Trajectory traj;
  traj.dt = step;
  traj.steps = steps;
  double t = init.t;
  auto record = [&] {
    const double a = v_norm(s, c);
    if (!std::isfinite(a)) fail(Errc::StepTooLarge, "velocity norm overflowed");
    if (!traj.times.empty()) {
      const double prev = traj.amplitude.back();
      if (prev > 0.0 && a > 0.0 && std::log(a / prev) / (t - traj.times.back()) > guard) {
        fail(Errc::StepTooLarge, "growth far exceeds the physical bound");
      }
    }
    traj.times.push_back(t);
    traj.amplitude.push_back(a);
    const double scale = max_abs_N(s);
    if (scale > 0.0) traj.div_drift = std::max(traj.div_drift, (div_N(s, c) - div0).abs().maxCoeff() / scale);
  };

  record();
  long next_sample = 1;
  long next_checkpoint = 1;
  for (long k = 1; k <= steps; ++k) {
    const State k1 = rhs(s, c);
    const State k2 = rhs(s + k1 * (0.5 * step), c);
    const State k3 = rhs(s + k2 * (0.5 * step), c);
    const State k4 = rhs(s + k3 * step, c);
    s = s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (step / 6.0);
    t = init.t + k * step;
    if (k * (opts.samples - 1) >= next_sample * steps) {
      record();
      ++next_sample;
    }
    if (opts.checkpoints > 0 && k * opts.checkpoints >= next_checkpoint * steps) {
      traj.checkpoints.push_back(to_mode_state(s, t));
      ++next_checkpoint;
    }
  }
  return traj;
}

ModeState lift_eigenfunction(const ModalField& f, double lam, const EquilibriumProfile& prof) {
  const int n = prof.grid.n;
  if (f.psi.size() != static_cast<std::size_t>(n)) {
    fail(Errc::InvalidArgument, "eigenfunction does not match the profile grid");
  }
  if (lam == 0.0) fail(Errc::InvalidArgument, "lifting needs a nonzero growth rate");
  const Coefficients c = coefficients(prof, f.mode);
  const Eigen::Index N = n + 2;
  State s;
  for (int k = 0; k < 3; ++k) s.v[k] = CArr::Zero(N);
  for (int i = 1; i <= n; ++i) {
    // cells i-1 and i straddle closed node i
    s.v[0](i) = -I * 0.5 * (f.phi[i - 1] + f.phi[i]);
    s.v[1](i) = -I * 0.5 * (f.theta[i - 1] + f.theta[i]);
    s.v[2](i) = f.psi[i - 1];
  }
  const CArr div = c.ik1 * s.v[0] + c.ik2 * s.v[1] + ddx(s.v[2], c.h);
  s.rho = -(c.rho * (c.ik1 * s.v[0] + c.ik2 * s.v[1]) + ddx(c.rho * s.v[2], c.h)) / lam;
  s.N[0] = (c.m * c.ik1 * s.v[0] - s.v[2] * c.dm - c.m * div) / lam;
  s.N[1] = c.m * c.ik1 * s.v[1] / lam;
  s.N[2] = c.m * c.ik1 * s.v[2] / lam;
  return to_mode_state(s, 0.0);
}

ModeState random_state(const EquilibriumProfile& prof, ModeSpec mode, std::uint64_t seed, int modes) {
  const int n = prof.grid.n;
  const Eigen::Index N = n + 2;
  const double L = prof.grid.hi - prof.grid.lo;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto smooth = [&]() {
    CArr f = CArr::Zero(N);
    for (int k = 1; k <= modes; ++k) {
      const cd a(normal(rng) / k, normal(rng) / k);
      for (Eigen::Index i = 0; i < N; ++i) {
        f(i) += a * std::sin(k * std::numbers::pi * static_cast<double>(i) * prof.grid.h / L);
      }
    }
    return f;
  };

  State s;
  s.rho = smooth();
  for (int k = 0; k < 3; ++k) s.v[k] = smooth();
  s.N[0] = smooth();
  s.N[1] = smooth();
  // N3' = -(i xi1 N1 + i xi2 N2), trapezoid from the bottom wall
  const CArr src = -(I * mode.xi1 * s.N[0] + I * mode.xi2 * s.N[1]);
  s.N[2] = CArr::Zero(N);
  for (Eigen::Index i = 1; i < N; ++i) s.N[2](i) = s.N[2](i - 1) + 0.5 * prof.grid.h * (src(i - 1) + src(i));
  return to_mode_state(s, 0.0);
}

std::vector<std::complex<double>> divergence_N(const ModeState& s, ModeSpec mode, double h) {
  const CArr d = I * mode.xi1 * to_array(s.N_hat[0]) + I * mode.xi2 * to_array(s.N_hat[1]) +
                 ddx(to_array(s.N_hat[2]), h);
  return to_vector(d);
}

double velocity_norm(const ModeState& s, const EquilibriumProfile& prof) {
  check_state(s, prof);
  return v_norm(from_mode_state(s), coefficients(prof, ModeSpec{}));
}

GrowthFit fit_growth_rate(const Trajectory& traj, double window) {
  if (!(window > 0.0 && window <= 1.0)) fail(Errc::InvalidArgument, "window must lie in (0, 1]");
  const std::size_t total = traj.times.size();
  if (total != traj.amplitude.size()) fail(Errc::InvalidArgument, "trajectory arrays differ in length");
  const std::size_t first = total - static_cast<std::size_t>(std::floor(window * total));
  if (total - first < 16) fail(Errc::InsufficientData, "fewer than 16 samples in the fit window");
  constexpr double kFloor = 1e-290;
  std::vector<double> x, y;
  for (std::size_t i = first; i < total; ++i) {
    if (traj.amplitude[i] > kFloor) {
      x.push_back(traj.times[i]);
      y.push_back(std::log(traj.amplitude[i]));
    }
  }
  if (x.empty()) fail(Errc::ZeroAmplitude, "amplitude vanishes in the fit window");
  if (x.size() < 16) fail(Errc::InsufficientData, "fewer than 16 nonzero samples in the fit window");
  Eigen::MatrixXd A(x.size(), 2);
  Eigen::VectorXd b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = x[i];
    b(i) = y[i];
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(b);
  GrowthFit fit;
  fit.sigma = coef(1);
  fit.rms = std::sqrt((A * coef - b).squaredNorm() / x.size());
  fit.samples = static_cast<int>(x.size());
  return fit;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  CsvWriter w(path, {"t", "amplitude"});
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    w.row({format_number(traj.times[i]), format_number(traj.amplitude[i])});
  }
}

}  // namespace parker
