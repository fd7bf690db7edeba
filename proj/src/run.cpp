#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "parker/config.hpp"
#include "parker/criteria.hpp"
#include "parker/error.hpp"
#include "parker/evolve.hpp"
#include "parker/presets.hpp"
#include "parker/report.hpp"
#include "parker/spectral.hpp"

namespace parker {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

EquilibriumProfile build_profile(const RunConfig& c) {
  PhysicalParams p;
  p.gamma = c.gamma;
  p.A = c.A;
  p.lambda = c.lambda;
  p.mu1 = c.mu1;
  p.nu = c.nu;
  p.gravity = Gravity::constant(c.g);
  const DensitySpec d = c.preset.empty() ? load_tabulated_profile(c.profile_file) : find_preset(c.preset).density;
  return build_equilibrium(p, d, build_grid(c.lo, c.hi, c.n), c.margin);
}

ScanSpec scan_spec(const RunConfig& c) {
  ScanSpec s;
  s.xi1_values = c.xi1_values;
  s.xi2_values = c.xi2_values;
  s.L1 = c.L1;
  s.L2 = c.L2;
  s.n_grid = c.n;
  s.method = c.method;
  s.tol = c.tol;
  return s;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_field(const ModalField& f, const EquilibriumProfile& prof, const fs::path& stem, OutputFormat fmt) {
  const Grid1D& gr = prof.grid;
  if (fmt == OutputFormat::csv) {
    {
      CsvWriter w(stem.string() + "_cells.csv", {"x3", "phi", "theta"});
      for (int j = 0; j < gr.cells(); ++j)
        w.row({format_number(gr.cell_center(j)), format_number(f.phi[j]), format_number(f.theta[j])});
    }
    CsvWriter w(stem.string() + "_nodes.csv", {"x3", "psi"});
    for (int i = 0; i < gr.n; ++i) w.row({format_number(gr.node(i)), format_number(f.psi[i])});
    return;
  }
  json j;
  j["cell_x3"] = json::array();
  j["node_x3"] = json::array();
  for (int c = 0; c < gr.cells(); ++c) j["cell_x3"].push_back(gr.cell_center(c));
  for (int i = 0; i < gr.n; ++i) j["node_x3"].push_back(gr.node(i));
  j["phi"] = f.phi;
  j["theta"] = f.theta;
  j["psi"] = f.psi;
  write_json(j, stem.string() + ".json");
}

json result_json(const GrowthResult& r, const EquilibriumProfile& prof) {
  json j{{"method", to_string(r.method)},
         {"re_lambda", r.lam.real()},
         {"im_lambda", r.lam.imag()},
         {"residual", number(r.residual)},
         {"accepted", r.accepted}};
  if (r.method == GrowthMethod::fixed_point) {
    const double lam = r.lam.real();
    const double ec = energy_Ec(r.field, lam, prof);
    j["energy_Ec"] = ec;
    j["variational_defect"] = std::abs(ec - lam * lam) / (lam * lam);
  }
  return j;
}

int cmd_equilibrium(const RunConfig& c, const EquilibriumProfile& prof, const fs::path& out) {
  const double res = equilibrium_residual(prof);
  const double tol = balance_tolerance(prof);
  if (c.format == OutputFormat::csv) {
    write_profile_csv(prof, out / "profile.csv");
  } else {
    const ProfileSamples& s = prof.closed;
    write_json(json{{"x3", s.x}, {"rho", s.rho}, {"drho", s.drho}, {"pressure", s.pressure},
                    {"m", s.m}, {"m2", s.m2}, {"m2prime", s.m2prime}, {"g", s.g}},
               out / "profile.json");
  }
  write_json(json{{"residual", res}, {"tolerance", tol}, {"balanced", res <= tol}, {"C", prof.C},
                  {"margin", prof.margin}, {"n", prof.grid.n}},
             out / "equilibrium.json");
  std::cout << "balance residual " << format_number(res) << " (tolerance " << format_number(tol) << ")\n";
  return res <= tol ? 0 : 2;
}

int cmd_criteria(const RunConfig& c, const EquilibriumProfile& prof, const fs::path& out) {
  const CriteriaReport r = evaluate_criteria(prof, c.strip_a, c.strip_b, c.L2);
  json j = to_json(r);
  j["sign_equivalence_violations"] = sign_equivalence_violations(prof);
  write_json(j, out / "criteria.json");
  std::cout << "kappa " << format_number(r.kappa) << "  xi2d " << format_number(r.xi2d) << "  xi3d "
            << format_number(r.xi3d) << '\n';
  return 0;
}

int cmd_growth(const RunConfig& c, const EquilibriumProfile& prof, const fs::path& out) {
  const ModeSpec mode{c.xi1, c.xi2};
  const ModalOperators ops = assemble_operators(prof, mode);
  json results = json::array();
  bool ok = true;
  if (c.method != ScanMethod::fixed_point) {
    const auto pairs = solve_qep(ops, c.tol, 1);
    if (pairs.empty()) {
      results.push_back({{"method", "qep"}, {"note", "no positive real eigenvalue"}});
    } else {
      results.push_back(result_json(pairs[0], prof));
      ok = ok && pairs[0].accepted;
      write_field(pairs[0].field, prof, out / "mode_qep", c.format);
    }
  }
  if (c.method != ScanMethod::qep) {
    const auto fp = growth_rate_fixed_point(ops, c.tol);
    if (!fp) {
      results.push_back({{"method", "fixed_point"}, {"note", "stable"}});
    } else {
      results.push_back(result_json(*fp, prof));
      ok = ok && fp->accepted;
      write_field(fp->field, prof, out / "mode_fixed_point", c.format);
    }
  }
  write_json(json{{"xi1", c.xi1}, {"xi2", c.xi2}, {"results", results}}, out / "growth.json");
  for (const auto& r : results) {
    std::cout << r["method"].get<std::string>() << ": "
              << (r.contains("re_lambda") ? format_number(r["re_lambda"].get<double>()) : r["note"].get<std::string>())
              << '\n';
  }
  return ok ? 0 : 2;
}

void write_table(const DispersionTable& t, const fs::path& out, OutputFormat fmt) {
  if (fmt == OutputFormat::csv) {
    write_dispersion_csv(t, out / "dispersion.csv");
    return;
  }
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"xi1", r.xi1}, {"xi2", r.xi2}, {"re_lambda", number(r.re_lambda)},
                    {"im_lambda", number(r.im_lambda)}, {"method", r.method},
                    {"residual", number(r.residual)}, {"flagged", r.flagged}, {"note", r.note}});
  }
  write_json(json{{"rows", rows}}, out / "dispersion.json");
}

int cmd_scan(const RunConfig& c, const EquilibriumProfile& prof, const fs::path& out) {
  const DispersionTable t = dispersion_scan(prof, scan_spec(c));
  write_table(t, out, c.format);
  write_json(to_json(t), out / "scan.json");
  std::cout << "max growth " << format_number(t.max_growth) << " at (" << format_number(t.argmax.xi1) << ", "
            << format_number(t.argmax.xi2) << "), flagged rows " << t.flagged_rows << '\n';
  return t.flagged_rows == 0 ? 0 : 2;
}

int cmd_evolve(const RunConfig& c, const EquilibriumProfile& prof, const fs::path& out) {
  const ModeSpec mode{c.xi1, c.xi2};
  ModeState init;
  json ref = nullptr;
  if (c.init == InitKind::random) {
    init = random_state(prof, mode, c.seed);
  } else {
    const ModalOperators ops = assemble_operators(prof, mode);
    const auto pairs = solve_qep(ops, c.tol, 1);
    if (pairs.empty() || !(pairs[0].lam.real() > kGrowthFloor) || pairs[0].lam.imag() != 0.0) {
      fail(Errc::InvalidMode, "numerics.init: eigen start needs an unstable real mode; use --init random");
    }
    init = lift_eigenfunction(pairs[0].field, pairs[0].lam.real(), prof);
    ref = pairs[0].lam.real();
  }
  const double dt = c.dt > 0.0 ? c.dt : default_time_step(prof, mode);
  EvolveOptions opts;
  opts.samples = c.samples;
  const Trajectory traj = evolve_mode(prof, mode, init, c.t_end, dt, opts);
  if (c.format == OutputFormat::csv) {
    write_trajectory_csv(traj, out / "trajectory.csv");
  } else {
    write_json(json{{"t", traj.times}, {"amplitude", traj.amplitude}}, out / "trajectory.json");
  }
  const GrowthFit fit = fit_growth_rate(traj, c.fit_window);
  write_json(json{{"xi1", c.xi1},
                  {"xi2", c.xi2},
                  {"init", to_string(c.init)},
                  {"dt", traj.dt},
                  {"steps", traj.steps},
                  {"sigma", fit.sigma},
                  {"fit_rms", fit.rms},
                  {"fit_samples", fit.samples},
                  {"div_drift", traj.div_drift},
                  {"qep_lambda", ref}},
             out / "evolve.json");
  std::cout << "sigma " << format_number(fit.sigma) << "  div drift " << format_number(traj.div_drift) << '\n';
  return 0;
}

int cmd_verdict(const RunConfig& c, const EquilibriumProfile& prof, const fs::path& out) {
  const Verdict v = stability_verdict(prof, scan_spec(c), c.domain, StripGeometry{c.strip_a, c.strip_b});
  write_json(to_json(v), out / "verdict.json");
  if (v.scanned) write_table(v.table, out, c.format);
  std::cout << v.conclusion << (v.consistent ? "" : " (inconsistent with criteria)") << '\n';
  return v.table.flagged_rows == 0 ? 0 : 2;
}

}  // namespace

int run(const RunConfig& c) {
  try {
    const fs::path out = c.out_dir;
    fs::create_directories(out);
    {
      std::ofstream echo(out / "effective.ini", std::ios::binary);
      echo << effective_config_text(c);
      if (!echo) fail(Errc::InvalidArgument, "output.out-dir: cannot write " + (out / "effective.ini").string());
    }
    const EquilibriumProfile prof = build_profile(c);
    switch (c.command) {
      case Command::equilibrium: return cmd_equilibrium(c, prof, out);
      case Command::criteria: return cmd_criteria(c, prof, out);
      case Command::growth: return cmd_growth(c, prof, out);
      case Command::scan: return cmd_scan(c, prof, out);
      case Command::evolve: return cmd_evolve(c, prof, out);
      case Command::verdict: return cmd_verdict(c, prof, out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_numerical(e.code()) ? 2 : 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace parker
