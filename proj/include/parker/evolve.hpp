#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "parker/energy.hpp"
#include "parker/profiles.hpp"

namespace parker {

/// Complex amplitudes on the closed node set (n+2 points, walls included).
/// Velocity vanishes at both walls.
struct ModeState {
  using CVec = std::vector<std::complex<double>>;
  CVec rho_hat;
  CVec v_hat[3];
  CVec N_hat[3];
  double t = 0.0;

  static ModeState zeros(int closed_points);
  std::size_t size() const { return rho_hat.size(); }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> amplitude;  // sqrt(∫ rho |v|^2)
  std::vector<ModeState> checkpoints;
  /// max over samples of |div N(t) - div N(0)|_inf / |N(t)|_inf
  double div_drift = 0.0;
  double dt = 0.0;
  long steps = 0;
};

struct EvolveOptions {
  int samples = 400;
  int checkpoints = 0;  // evenly spaced stored states (besides none)
};

/// dt = min(0.2 h^2 / nu_max, wave limit for the fastest magnetosonic speed).
double default_time_step(const EquilibriumProfile& prof, ModeSpec mode);

/// RK4 integration of the linearized system for one horizontal mode.
/// Throws StepTooLarge when dt exceeds twice the stable step or the norm blows up.
Trajectory evolve_mode(const EquilibriumProfile& prof, ModeSpec mode, const ModeState& init,
                       double t_end, double dt, const EvolveOptions& opts = {});

/// Lifts a real modal eigenfunction with growth rate lam to the primitive state.
ModeState lift_eigenfunction(const ModalField& f, double lam, const EquilibriumProfile& prof);

/// Smooth random state (a few sine modes per component); N3 integrated so div N starts near 0.
ModeState random_state(const EquilibriumProfile& prof, ModeSpec mode, std::uint64_t seed,
                       int modes = 4);

/// i xi1 N1 + i xi2 N2 + N3' on the closed nodes.
std::vector<std::complex<double>> divergence_N(const ModeState& s, ModeSpec mode, double h);

double velocity_norm(const ModeState& s, const EquilibriumProfile& prof);

struct GrowthFit {
  double sigma = 0.0;
  double rms = 0.0;
  int samples = 0;
};

/// Least-squares slope of log(amplitude) on the final `window` fraction of the samples.
GrowthFit fit_growth_rate(const Trajectory& traj, double window = 0.5);

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

}  // namespace parker
