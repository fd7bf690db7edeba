// Serial reference vs OpenMP kernels: dispersion scan and 3D grid energy.
#include <benchmark/benchmark.h>

#include <random>

#include "parker/energy.hpp"
#include "parker/presets.hpp"
#include "parker/scan.hpp"

namespace {

const parker::EquilibriumProfile& profile() {
  static const auto prof = parker::build_preset("schwarzschild-exp", 64);
  return prof;
}

parker::ScanSpec small_scan() {
  parker::ScanSpec s;
  s.L1 = 4.0;
  s.L2 = 1.0;
  s.n_grid = 64;
  for (int k = 0; k <= 7; ++k) s.xi1_values.push_back(k / s.L1);
  s.xi2_values = {1.0};
  return s;
}

parker::GridField3D random_grid(int n12) {
  parker::SlabGeometry geom;
  geom.vertical = profile().grid;
  geom.n1 = geom.n2 = n12;
  auto w = parker::GridField3D::zeros(geom);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> d;
  for (auto* v : {&w.w1, &w.w2, &w.w3})
    for (double& x : *v) x = d(rng);
  return w;
}

void BM_ScanSerial(benchmark::State& st) {
  const auto spec = small_scan();
  for (auto _ : st) benchmark::DoNotOptimize(parker::dispersion_scan_serial(profile(), spec));
}

void BM_ScanParallel(benchmark::State& st) {
  const auto spec = small_scan();
  for (auto _ : st) benchmark::DoNotOptimize(parker::dispersion_scan(profile(), spec));
}

void BM_GridEnergySerial(benchmark::State& st) {
  const auto w = random_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(parker::energy_E_grid_serial(w, profile()));
}

void BM_GridEnergyParallel(benchmark::State& st) {
  const auto w = random_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(parker::energy_E_grid(w, profile()));
}

}  // namespace

BENCHMARK(BM_ScanSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScanParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GridEnergySerial)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GridEnergyParallel)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
