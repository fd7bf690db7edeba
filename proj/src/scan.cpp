#include "parker/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parker/error.hpp"
#include "parker/report.hpp"
#include "parker/spectral.hpp"

namespace parker {

namespace {

std::vector<ModeSpec> ordered_modes(const ScanSpec& spec) {
  std::vector<double> x1 = spec.xi1_values, x2 = spec.xi2_values;
  std::sort(x1.begin(), x1.end());
  std::sort(x2.begin(), x2.end());
  x1.erase(std::unique(x1.begin(), x1.end()), x1.end());
  x2.erase(std::unique(x2.begin(), x2.end()), x2.end());
  std::vector<ModeSpec> modes;
  for (double b : x2)
    for (double a : x1) modes.push_back({a, b});
  return modes;
}

int rows_per_mode(ScanMethod m) { return m == ScanMethod::both ? 2 : 1; }

DispersionRow failed_row(ModeSpec mode, const std::string& method, const std::string& what) {
  DispersionRow r;
  r.xi1 = mode.xi1;
  r.xi2 = mode.xi2;
  r.re_lambda = std::numeric_limits<double>::quiet_NaN();
  r.im_lambda = std::numeric_limits<double>::quiet_NaN();
  r.method = method;
  r.residual = std::numeric_limits<double>::quiet_NaN();
  r.flagged = true;
  r.note = what;
  return r;
}

void solve_mode(const EquilibriumProfile& prof, const ScanSpec& spec, ModeSpec mode,
                DispersionRow* out) {
  int slot = 0;
  std::optional<ModalOperators> ops;
  try {
    ops = assemble_operators(prof, mode);
  } catch (const Error& e) {
    for (int k = 0; k < rows_per_mode(spec.method); ++k) out[k] = failed_row(mode, "assembly", e.what());
    return;
  }
  if (spec.method != ScanMethod::fixed_point) {
    DispersionRow r;
    r.xi1 = mode.xi1;
    r.xi2 = mode.xi2;
    r.method = to_string(GrowthMethod::qep);
    try {
      const auto pairs = solve_qep(*ops, spec.tol, 1);
      if (pairs.empty()) {
        r.note = "no positive real eigenvalue";
      } else {
        r.re_lambda = pairs[0].lam.real();
        r.im_lambda = pairs[0].lam.imag();
        r.residual = pairs[0].residual;
        r.flagged = !pairs[0].accepted;
        if (r.flagged) r.note = "residual above tolerance";
      }
    } catch (const Error& e) {
      r = failed_row(mode, r.method, e.what());
    }
    out[slot++] = r;
  }
  if (spec.method != ScanMethod::qep) {
    DispersionRow r;
    r.xi1 = mode.xi1;
    r.xi2 = mode.xi2;
    r.method = to_string(GrowthMethod::fixed_point);
    try {
      const auto fp = growth_rate_fixed_point(*ops, spec.tol);
      if (!fp) {
        r.note = "stable";
      } else {
        r.re_lambda = fp->lam.real();
        r.residual = fp->residual;
        r.flagged = !fp->accepted;
        if (r.flagged) r.note = "fixed point not converged";
      }
    } catch (const Error& e) {
      r = failed_row(mode, r.method, e.what());
    }
    out[slot++] = r;
  }
}

void summarize(DispersionTable& t, const ScanSpec& spec) {
  const std::string primary =
      spec.method == ScanMethod::fixed_point ? to_string(GrowthMethod::fixed_point) : to_string(GrowthMethod::qep);
  t.max_growth = -std::numeric_limits<double>::infinity();
  t.flagged_rows = 0;
  for (const auto& r : t.rows) {
    if (r.flagged) ++t.flagged_rows;
    if (r.method != primary || r.flagged) continue;
    if (r.xi1 == 0.0 && r.xi2 == 0.0) continue;  // no instability claim for the mean mode
    if (r.re_lambda > t.max_growth) {
      t.max_growth = r.re_lambda;
      t.argmax = {r.xi1, r.xi2};
    }
  }
  if (!std::isfinite(t.max_growth)) t.max_growth = 0.0;

  t.bands.clear();
  for (const auto& r : t.rows) {
    if (t.bands.empty() || t.bands.back().xi2 != r.xi2) t.bands.push_back({r.xi2, 0, 0.0, 0.0});
    if (r.method != primary || r.flagged || !(r.re_lambda > kGrowthFloor)) continue;
    if (r.xi1 == 0.0 && r.xi2 == 0.0) continue;
    BandExtent& b = t.bands.back();
    if (b.unstable_count == 0) {
      b.xi1_min = b.xi1_max = r.xi1;
    } else {
      b.xi1_min = std::min(b.xi1_min, r.xi1);
      b.xi1_max = std::max(b.xi1_max, r.xi1);
    }
    ++b.unstable_count;
  }
}

DispersionTable run_scan(const EquilibriumProfile& prof, const ScanSpec& spec, bool parallel) {
  spec.validate();
  if (prof.grid.n != spec.n_grid) fail(Errc::InvalidArgument, "profile grid differs from the scan n_grid");
  const auto modes = ordered_modes(spec);
  const int per = rows_per_mode(spec.method);
  DispersionTable t;
  t.rows.resize(modes.size() * per);
  const long count = static_cast<long>(modes.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long k = 0; k < count; ++k) {
    solve_mode(prof, spec, modes[k], &t.rows[k * per]);
  }
  summarize(t, spec);
  return t;
}

}  // namespace

std::string to_string(ScanMethod m) {
  switch (m) {
    case ScanMethod::qep: return "qep";
    case ScanMethod::fixed_point: return "fixed_point";
    case ScanMethod::both: return "both";
  }
  return "?";
}

ScanMethod parse_scan_method(const std::string& s) {
  if (s == "qep") return ScanMethod::qep;
  if (s == "fixed_point") return ScanMethod::fixed_point;
  if (s == "both") return ScanMethod::both;
  fail(Errc::InvalidArgument, "method must be qep, fixed_point or both (got '" + s + "')");
}

void ScanSpec::validate() const {
  if (xi1_values.empty() || xi2_values.empty()) fail(Errc::InvalidArgument, "scan needs nonempty xi1 and xi2 grids");
  for (double v : xi1_values)
    if (!(v >= 0.0) || !std::isfinite(v)) fail(Errc::InvalidArgument, "xi1 values must be finite and >= 0");
  for (double v : xi2_values)
    if (!(v >= 0.0) || !std::isfinite(v)) fail(Errc::InvalidArgument, "xi2 values must be finite and >= 0");
  if (!(L1 > 0.0) || !(L2 > 0.0)) fail(Errc::InvalidArgument, "L1 and L2 must be positive");
  if (n_grid < 8) fail(Errc::InvalidArgument, "n_grid must be at least 8");
  if (!(tol > 0.0)) fail(Errc::InvalidArgument, "tol must be positive");
}

ScanSpec harmonic_scan_spec(double L1, double L2, int K) {
  ScanSpec s;
  s.L1 = L1;
  s.L2 = L2;
  for (int k = 0; k <= K; ++k) {
    s.xi1_values.push_back(k / L1);
    s.xi2_values.push_back(k / L2);
  }
  return s;
}

DispersionTable dispersion_scan(const EquilibriumProfile& prof, const ScanSpec& spec) {
  return run_scan(prof, spec, true);
}

DispersionTable dispersion_scan_serial(const EquilibriumProfile& prof, const ScanSpec& spec) {
  return run_scan(prof, spec, false);
}

std::string to_string(Domain d) {
  switch (d) {
    case Domain::slab3d: return "slab3d";
    case Domain::slab2d: return "slab2d";
    case Domain::strip: return "strip";
  }
  return "?";
}

Domain parse_domain(const std::string& s) {
  if (s == "slab3d") return Domain::slab3d;
  if (s == "slab2d") return Domain::slab2d;
  if (s == "strip") return Domain::strip;
  fail(Errc::InvalidArgument, "domain must be slab3d, slab2d or strip (got '" + s + "')");
}

Verdict stability_verdict(const EquilibriumProfile& prof, const ScanSpec& spec, Domain domain,
                          StripGeometry strip) {
  spec.validate();
  Verdict v;
  v.domain = domain;
  v.criteria = evaluate_criteria(prof, strip.a, strip.b, spec.L2);
  const CriteriaReport& c = v.criteria;

  if (domain == Domain::strip) {
    v.conclusion = c.strip_stable_sufficient ? "stable (sufficient bound)"
                                             : "no conclusion: field below the strip bound";
    return v;
  }

  ScanSpec run = spec;
  if (domain == Domain::slab2d) {
    run.xi2_values = {0.0};
    v.two_d_branch = c.kappa > 1.0 && c.xi2d > 0.0 && spec.L1 * c.xi2d > 1.0;
  } else {
    v.schwarzschild_branch = c.schwarzschild && c.xi3d > 0.0 && spec.L1 * c.xi3d > 1.0;
    v.tserkovnikov_branch = c.tserkovnikov;
  }
  v.table = dispersion_scan(prof, run);
  v.scanned = true;
  v.max_growth = v.table.max_growth;

  const bool predicted = v.schwarzschild_branch || v.tserkovnikov_branch || v.two_d_branch;
  const bool grows = v.max_growth > kGrowthFloor;
  v.consistent = !predicted || grows;
  if (!v.consistent) {
    v.diagnostics.push_back("instability predicted by the criteria but no scanned mode grows");
  }
  if (v.table.flagged_rows > 0) {
    v.diagnostics.push_back(std::to_string(v.table.flagged_rows) + " flagged rows in the scan");
  }
  if (grows) {
    v.conclusion = "unstable";
  } else {
    v.conclusion = "no instability detected at scanned modes";
  }
  return v;
}

void write_dispersion_csv(const DispersionTable& t, const std::filesystem::path& path) {
  CsvWriter w(path, {"xi1", "xi2", "re_lambda", "im_lambda", "method", "residual"});
  for (const auto& r : t.rows) {
    w.row({format_number(r.xi1), format_number(r.xi2), format_number(r.re_lambda),
           format_number(r.im_lambda), r.method, format_number(r.residual)});
  }
}

nlohmann::json to_json(const DispersionTable& t) {
  nlohmann::json j;
  j["max_growth"] = t.max_growth;
  j["argmax"] = {{"xi1", t.argmax.xi1}, {"xi2", t.argmax.xi2}};
  j["flagged_rows"] = t.flagged_rows;
  j["rows"] = t.rows.size();
  nlohmann::json bands = nlohmann::json::array();
  for (const auto& b : t.bands) {
    nlohmann::json e{{"xi2", b.xi2}, {"unstable_count", b.unstable_count}};
    if (b.unstable_count > 0) {
      e["xi1_min"] = b.xi1_min;
      e["xi1_max"] = b.xi1_max;
    }
    bands.push_back(e);
  }
  j["unstable_bands"] = bands;
  nlohmann::json flagged = nlohmann::json::array();
  for (const auto& r : t.rows) {
    if (r.flagged) flagged.push_back({{"xi1", r.xi1}, {"xi2", r.xi2}, {"method", r.method}, {"note", r.note}});
  }
  j["flagged"] = flagged;
  return j;
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["domain"] = to_string(v.domain);
  nlohmann::json crit = to_json(v.criteria);
  for (const char* k : {"schwarzschild_margin", "buoyancy", "tserkovnikov_margin", "rt_margin"}) crit.erase(k);
  j["criteria"] = crit;
  j["schwarzschild_branch"] = v.schwarzschild_branch;
  j["tserkovnikov_branch"] = v.tserkovnikov_branch;
  j["two_d_branch"] = v.two_d_branch;
  j["max_growth"] = v.max_growth;
  j["scanned"] = v.scanned;
  j["consistent"] = v.consistent;
  j["conclusion"] = v.conclusion;
  j["diagnostics"] = v.diagnostics;
  if (v.scanned) j["scan"] = to_json(v.table);
  return j;
}

}  // namespace parker
