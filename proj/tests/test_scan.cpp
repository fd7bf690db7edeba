#include "doctest.h"

#include <fstream>
#include <optional>

#include "parker/criteria.hpp"
#include "parker/error.hpp"
#include "parker/presets.hpp"
#include "parker/scan.hpp"
#include "parker/spectral.hpp"
#include "support.hpp"

using namespace parker;

namespace {

ScanSpec spec_for(int n, std::vector<double> xi1, std::vector<double> xi2, ScanMethod m = ScanMethod::qep) {
  ScanSpec s;
  s.n_grid = n;
  s.xi1_values = std::move(xi1);
  s.xi2_values = std::move(xi2);
  s.method = m;
  return s;
}

}  // namespace

TEST_CASE("no gravity: every row is stable") {
  const auto prof = build_preset("uniform-g0", 32);
  const auto t = dispersion_scan(prof, spec_for(32, {0.0, 0.25, 0.5, 1.0}, {0.0, 1.0}));
  CHECK(t.rows.size() == 8);
  for (const auto& r : t.rows) {
    CHECK_FALSE(r.flagged);
    CHECK(r.re_lambda <= 1e-10);
  }
  CHECK(t.max_growth <= 0.0);
  for (const auto& b : t.bands) CHECK(b.unstable_count == 0);
}

TEST_CASE("Schwarzschild band lies below the threshold") {
  const auto prof = build_preset("schwarzschild-exp", 64);
  const double xi3 = xi_3d(prof, 1.0);
  std::vector<double> xi1;
  for (int k = 0; k <= 12; ++k) xi1.push_back(0.25 * k);
  const auto t = dispersion_scan(prof, spec_for(64, xi1, {1.0}));
  REQUIRE(t.bands.size() == 1);
  const auto& band = t.bands[0];
  CHECK(band.unstable_count > 0);
  CHECK(band.xi1_min > 0.0);
  CHECK(band.xi1_max < xi3 + 2.0 * prof.grid.h);
  CHECK(t.max_growth > 0.0);
}

TEST_CASE("single mode row equals the direct solve") {
  const auto prof = build_preset("schwarzschild-exp", 48);
  const auto t = dispersion_scan(prof, spec_for(48, {0.5}, {1.0}, ScanMethod::both));
  REQUIRE(t.rows.size() == 2);
  const auto ops = assemble_operators(prof, {0.5, 1.0});
  CHECK(t.rows[0].method == "qep");
  CHECK(t.rows[0].re_lambda == solve_qep(ops, 1e-8, 1).front().lam.real());
  CHECK(t.rows[1].method == "fixed_point");
  CHECK(t.rows[1].re_lambda == growth_rate_fixed_point(ops)->lam.real());
}

TEST_CASE("parallel scan matches the serial reference exactly") {
  const auto prof = build_preset("tserkovnikov-layer", 32);
  const auto spec = spec_for(32, {0.0, 0.5, 1.0, 1.5}, {0.0, 1.0, 2.0}, ScanMethod::both);
  const auto a = dispersion_scan(prof, spec), b = dispersion_scan_serial(prof, spec);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].xi1 == b.rows[i].xi1);
    CHECK(a.rows[i].xi2 == b.rows[i].xi2);
    CHECK(a.rows[i].re_lambda == b.rows[i].re_lambda);
    CHECK(a.rows[i].method == b.rows[i].method);
  }
  CHECK(a.max_growth == b.max_growth);
}

TEST_CASE("empty or mismatched scans are rejected") {
  const auto prof = build_preset("uniform-g0", 32);
  auto code = [&](const ScanSpec& s) -> std::optional<Errc> {
    try {
      dispersion_scan(prof, s);
    } catch (const Error& e) {
      return e.code();
    }
    return std::nullopt;
  };
  CHECK(code(spec_for(32, {}, {1.0})) == Errc::InvalidArgument);
  CHECK(code(spec_for(32, {1.0}, {})) == Errc::InvalidArgument);
  CHECK(code(spec_for(64, {1.0}, {1.0})) == Errc::InvalidArgument);
  CHECK(code(spec_for(32, {-1.0}, {1.0})) == Errc::InvalidArgument);
}

TEST_CASE("harmonic grid") {
  const auto s = harmonic_scan_spec(4.0, 1.0, 16);
  REQUIRE(s.xi1_values.size() == 17);
  CHECK(s.xi1_values[4] == 1.0);
  CHECK(s.xi2_values[16] == 16.0);
}

TEST_CASE("verdicts") {
  SUBCASE("no gravity") {
    const auto prof = build_preset("uniform-g0", 32);
    const auto v = stability_verdict(prof, spec_for(32, {0.0, 0.5, 1.0}, {0.0, 1.0}), Domain::slab3d, {});
    CHECK_FALSE(v.schwarzschild_branch);
    CHECK_FALSE(v.tserkovnikov_branch);
    CHECK_FALSE(v.two_d_branch);
    CHECK(v.max_growth <= 0.0);
    CHECK(v.consistent);
  }
  SUBCASE("Tserkovnikov layer grows at xi1 = 0") {
    const auto prof = build_preset("tserkovnikov-layer", 48);
    const auto v = stability_verdict(prof, spec_for(48, {0.0}, {1.0}), Domain::slab3d, {});
    CHECK(v.tserkovnikov_branch);
    CHECK(v.max_growth > 0.0);
    CHECK(v.consistent);
    CHECK(v.conclusion == "unstable");
  }
  SUBCASE("strong field on a strip is stable by the sufficient bound") {
    const auto prof = build_preset("strong-field", 64);
    const auto v = stability_verdict(prof, spec_for(64, {1.0}, {1.0}), Domain::strip, {0.0, 1.0});
    REQUIRE(v.criteria.strip_stable_sufficient);
    CHECK(v.conclusion == "stable (sufficient bound)");
    CHECK_FALSE(v.scanned);
  }
  SUBCASE("2D slab scans only xi2 = 0") {
    const auto prof = build_preset("schwarzschild-exp", 32);
    const auto v = stability_verdict(prof, spec_for(32, {0.25, 0.5}, {0.0, 1.0}), Domain::slab2d, {});
    for (const auto& r : v.table.rows) CHECK(r.xi2 == 0.0);
  }
}

TEST_CASE("dispersion CSV layout") {
  const auto prof = build_preset("uniform-g0", 16);
  const auto t = dispersion_scan(prof, spec_for(16, {0.5}, {1.0}));
  const auto path = std::filesystem::temp_directory_path() / "parker_disp.csv";
  write_dispersion_csv(t, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "xi1,xi2,re_lambda,im_lambda,method,residual\r");
  std::getline(in, line);
  CHECK(line.rfind("0.5,1,", 0) == 0);
}
