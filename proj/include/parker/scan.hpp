#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "parker/criteria.hpp"
#include "parker/energy.hpp"
#include "parker/profiles.hpp"

namespace parker {

enum class ScanMethod { qep, fixed_point, both };
std::string to_string(ScanMethod m);
ScanMethod parse_scan_method(const std::string& s);

struct ScanSpec {
  std::vector<double> xi1_values;
  std::vector<double> xi2_values;
  double L1 = 4.0;
  double L2 = 1.0;
  int n_grid = 128;
  ScanMethod method = ScanMethod::qep;
  double tol = 1e-8;

  void validate() const;
};

/// Harmonics k / L_i, k = 0..K, for both directions.
ScanSpec harmonic_scan_spec(double L1, double L2, int K = 16);

/// Growth rates at or below this count as stable (numerical zero modes sit near 1e-11).
inline constexpr double kGrowthFloor = 1e-8;

struct DispersionRow {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double re_lambda = 0.0;
  double im_lambda = 0.0;
  std::string method;
  double residual = 0.0;
  bool flagged = false;  // residual above tolerance or solver failure
  std::string note;
};

struct BandExtent {
  double xi2 = 0.0;
  int unstable_count = 0;
  double xi1_min = 0.0;  // meaningful only when unstable_count > 0
  double xi1_max = 0.0;
};

struct DispersionTable {
  std::vector<DispersionRow> rows;  // sorted by (xi2, xi1), qep row before fixed_point row
  double max_growth = 0.0;
  ModeSpec argmax;
  std::vector<BandExtent> bands;
  int flagged_rows = 0;
};

/// One solve per mode, modes spread over OpenMP threads; output independent of thread count.
DispersionTable dispersion_scan(const EquilibriumProfile& prof, const ScanSpec& spec);
DispersionTable dispersion_scan_serial(const EquilibriumProfile& prof, const ScanSpec& spec);

enum class Domain { slab3d, slab2d, strip };
std::string to_string(Domain d);
Domain parse_domain(const std::string& s);

struct Verdict {
  Domain domain = Domain::slab3d;
  CriteriaReport criteria;
  /// Schwarzschild holds somewhere and L1 > 1/xi3d.
  bool schwarzschild_branch = false;
  /// Tserkovnikov holds somewhere.
  bool tserkovnikov_branch = false;
  /// 2D slab: kappa > 1 and L1 > 1/xi2d.
  bool two_d_branch = false;
  double max_growth = 0.0;
  bool scanned = false;
  bool consistent = true;
  std::string conclusion;
  std::vector<std::string> diagnostics;
  DispersionTable table;
};

/// Strip cross-section (a, b) in x1, used only for the strip bound.
struct StripGeometry {
  double a = 0.0;
  double b = 1.0;
};

Verdict stability_verdict(const EquilibriumProfile& prof, const ScanSpec& spec, Domain domain,
                          StripGeometry strip = {});

void write_dispersion_csv(const DispersionTable& t, const std::filesystem::path& path);
nlohmann::json to_json(const DispersionTable& t);
nlohmann::json to_json(const Verdict& v);

}  // namespace parker
