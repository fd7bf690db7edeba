#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "parker/error.hpp"
#include "parker/presets.hpp"
#include "parker/profiles.hpp"
#include "support.hpp"

using namespace parker;
using testing::ConstCase;
using testing::constant_profile;

namespace {

std::filesystem::path write_table(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("uniform grid on three nodes") {
  const Grid1D g = build_grid(-1.0, 1.0, 3);
  CHECK(g.h == doctest::Approx(0.5));
  REQUIRE(g.nodes.size() == 3);
  CHECK(g.nodes[0] == doctest::Approx(-0.5));
  CHECK(g.nodes[1] == doctest::Approx(0.0));
  CHECK(g.nodes[2] == doctest::Approx(0.5));
}

TEST_CASE("grid spacing and first node") {
  const Grid1D g = build_grid(0.0, testing::pi, 255);
  CHECK(g.h == doctest::Approx(testing::pi / 256));
  CHECK(g.nodes.front() == doctest::Approx(testing::pi / 256));
}

TEST_CASE("odd grid is symmetric about the midpoint") {
  const Grid1D g = build_grid(-2.0, 2.0, 511);
  REQUIRE(g.nodes.size() == 511);
  CHECK(std::abs(g.nodes[255]) < 1e-15);
  for (int i = 0; i < 511; ++i) CHECK(g.nodes[i] == doctest::Approx(-g.nodes[510 - i]).epsilon(1e-14));
}

TEST_CASE("empty interval is rejected") {
  CHECK(code_of([] { build_grid(1.0, 1.0, 10); }) == Errc::DegenerateInterval);
}

TEST_CASE("no gravity, constant density: every gradient vanishes") {
  ConstCase c;
  c.lambda = 2.0;
  c.margin = 1.0;
  const auto prof = constant_profile(c);
  CHECK(prof.C == doctest::Approx(2.0));
  for (std::size_t i = 0; i < prof.closed.size(); ++i) {
    CHECK(prof.closed.pressure[i] == doctest::Approx(1.0));
    CHECK(prof.closed.m[i] == doctest::Approx(1.0));
    CHECK(prof.closed.dm[i] == doctest::Approx(0.0));
  }
  CHECK(equilibrium_residual(prof) == 0.0);
}

TEST_CASE("constant density under unit gravity matches the closed-form field") {
  ConstCase c;
  c.g = 1.0;
  c.lambda = 2.0;
  c.margin = 1.0;  // C = max(P + F) + 1 = 1 + (hi - lo) + 1
  c.n = 512;
  const auto prof = constant_profile(c);
  CHECK(prof.C == doctest::Approx(1.0 + (c.hi - c.lo) + 1.0));
  double prev = 1e300;
  for (std::size_t i = 0; i < prof.closed.size(); ++i) {
    const double x = prof.closed.x[i];
    const double exact = std::sqrt(prof.C - 1.0 - (x - c.lo));
    CHECK(prof.closed.m[i] == doctest::Approx(exact).epsilon(1e-12));
    CHECK(prof.closed.m[i] < prev);
    prev = prof.closed.m[i];
  }
  CHECK(equilibrium_residual(prof) <= 1e-8);
}

TEST_CASE("exponential density is balanced after construction") {
  PhysicalParams p;
  p.gamma = 5.0 / 3.0;
  p.gravity = Gravity::constant(2.0);
  const auto prof = build_equilibrium(p, DensitySpec::exponential(1.0, 0.7), build_grid(-1, 1, 200));
  CHECK(equilibrium_residual(prof) <= balance_tolerance(prof));
}

TEST_CASE("every preset is balanced at n = 512") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto prof = build_preset(name, 512);
    CHECK(equilibrium_residual(prof) <= balance_tolerance(prof));
  }
}

TEST_CASE("two-row table gives a constant density") {
  const auto path = write_table("parker_two_rows.txt", "# x3 rho\n-1 2\n1 2\n");
  const DensitySpec d = load_tabulated_profile(path);
  for (double x : {-1.0, -0.3, 0.0, 0.77, 1.0}) CHECK(d.value(x) == doctest::Approx(2.0));
}

TEST_CASE("tabulated exponential interpolates within 1e-6 between samples") {
  std::string body;
  for (int k = 0; k <= 100; ++k) {
    char line[64];
    const double x = -1.0 + 0.02 * k;
    std::snprintf(line, sizeof line, "%.17g %.17g\n", x, std::exp(-x));
    body += line;
  }
  const DensitySpec d = load_tabulated_profile(write_table("parker_exp.txt", body));
  // Natural end conditions leave an O(h^2) error at the ends that decays by about
  // 0.27 per sample inward; the 1e-6 bound is met once clear of the end bands.
  const Grid1D g = build_grid(-1.0, 1.0, 128);
  const double band = 5 * 0.02;
  double inner = 0.0, edge = 0.0;
  for (double x : g.nodes) {
    const double e = std::abs(d.value(x) - std::exp(-x));
    double& slot = std::min(x - g.lo, g.hi - x) >= band ? inner : edge;
    slot = std::max(slot, e);
  }
  CHECK(inner <= 1e-6);
  CHECK(edge <= 0.02 * 0.02 * std::exp(1.0));
}

TEST_CASE("repeated abscissa is rejected") {
  const auto path = write_table("parker_repeat.txt", "0 1\n0.5 1\n0.5 2\n1 1\n");
  CHECK(code_of([&] { load_tabulated_profile(path); }) == Errc::NonMonotoneAbscissa);
  const std::vector<double> x{0.0, 0.5, 0.5, 1.0}, r{1, 1, 2, 1};
  CHECK(code_of([&] { DensitySpec::tabulated(x, r); }) == Errc::NonMonotoneAbscissa);
}

TEST_CASE("malformed and nonpositive tables are rejected") {
  CHECK(code_of([] { load_tabulated_profile(write_table("parker_bad.txt", "0 1\n1 x\n")); }) == Errc::ParseError);
  CHECK(code_of([] { load_tabulated_profile(write_table("parker_neg.txt", "0 1\n1 -1\n")); }) ==
        Errc::NonPositiveDensity);
}

TEST_CASE("field scaling multiplies m and marks the profile synthetic") {
  const auto prof = build_preset("schwarzschild-exp", 64);
  const auto scaled = scale_field(prof, 3.0);
  CHECK(scaled.synthetic_field);
  for (std::size_t i = 0; i < prof.cells.size(); ++i) {
    CHECK(scaled.cells.m[i] == doctest::Approx(3.0 * prof.cells.m[i]));
    CHECK(scaled.cells.m2prime[i] == doctest::Approx(9.0 * prof.cells.m2prime[i]));
  }
}

TEST_CASE("without gravity (m^2)' = -(2 / lambda) P'") {
  PhysicalParams p;
  p.gravity = Gravity::constant(0.0);
  p.lambda = 1.7;
  p.gamma = 1.4;
  const auto prof = build_equilibrium(p, DensitySpec::tanh_layer(1.0, 0.3, 0.0, 0.3), build_grid(-1, 1, 256));
  for (std::size_t i = 0; i < prof.nodes.size(); ++i) {
    CHECK(prof.nodes.m2prime[i] == doctest::Approx(-2.0 / p.lambda * prof.nodes.dpressure[i]).epsilon(1e-9));
  }
}

TEST_CASE("pressure derivative follows the chain rule") {
  const auto prof = build_preset("rt-tanh", 256);
  const auto& s = prof.nodes;
  const auto& pp = prof.params;
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double chain = pp.A * pp.gamma * std::pow(s.rho[i], pp.gamma - 1.0) * s.drho[i];
    worst = std::max(worst, std::abs(s.dpressure[i] - chain));
    scale = std::max(scale, std::abs(chain));
  }
  CHECK(worst <= 1e-4 * scale);
}
