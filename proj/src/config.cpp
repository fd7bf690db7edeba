#include "parker/config.hpp"

#include <charconv>
#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "parker/error.hpp"
#include "parker/presets.hpp"
#include "parker/report.hpp"

namespace parker {

namespace {

const std::vector<std::string> kCommands = {"equilibrium", "criteria", "growth",
                                            "scan",        "evolve",   "verdict"};

Command parse_command(const std::string& s) {
  for (std::size_t i = 0; i < kCommands.size(); ++i)
    if (kCommands[i] == s) return static_cast<Command>(i);
  fail(Errc::InvalidArgument, "command: unknown '" + s + "'");
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  fail(Errc::InvalidArgument, "output.format: must be csv or json (got '" + s + "')");
}

InitKind parse_init(const std::string& s) {
  if (s == "eigen") return InitKind::eigen;
  if (s == "random") return InitKind::random;
  fail(Errc::InvalidArgument, "numerics.init: must be eigen or random (got '" + s + "')");
}

// Raw flag values before defaults are resolved against the preset or profile file.
struct RawArgs {
  std::string command;
  std::optional<std::string> preset, profile_file;
  std::optional<double> gamma, A, lambda, mu1, nu, g, margin, lo, hi;
  std::string domain = "slab3d";
  double strip_a = 0.0, strip_b = 1.0, L1 = 4.0, L2 = 1.0;
  std::optional<double> xi1, xi2;
  std::vector<std::string> xi1_values, xi2_values;
  int harmonics = 16;
  int n = 128;
  double tol = 1e-8;
  std::optional<std::string> method;
  double dt = 0.0, t_end = 20.0;
  int samples = 400;
  double fit_window = 0.5;
  std::string init = "eigen";
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::string format = "csv";
};

void require(bool ok, const std::string& what) {
  if (!ok) fail(Errc::InvalidArgument, what);
}

// Empty entries are dropped so that `--xi1-values ""` reads as an empty grid.
std::vector<double> number_list(const std::vector<std::string>& items, const std::string& field) {
  std::vector<double> out;
  for (const auto& s : items) {
    if (s.empty()) continue;
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    require(ec == std::errc() && end == s.data() + s.size(), field + ": '" + s + "' is not a number");
    require(std::isfinite(v) && v >= 0.0, field + ": values must be finite and >= 0");
    out.push_back(v);
  }
  require(!out.empty(), field + ": scan grid is empty");
  return out;
}

RunConfig resolve(const RawArgs& raw, bool xi1_given, bool xi2_given) {
  RunConfig c;
  c.command = parse_command(raw.command);
  require(!(raw.preset && raw.profile_file), "profile: --preset conflicts with --profile-file");
  require(raw.preset || raw.profile_file, "profile: one of --preset or --profile-file is required");

  PhysicalParams base;
  double lo = -1.0, hi = 1.0;
  std::optional<double> margin;
  if (raw.preset) {
    const Preset p = find_preset(*raw.preset);
    c.preset = p.name;
    base = p.params;
    lo = p.lo;
    hi = p.hi;
    margin = p.margin;
    require(base.gravity.is_constant(), "profile: preset with sampled gravity is not configurable");
  } else {
    c.profile_file = *raw.profile_file;
    const DensitySpec d = load_tabulated_profile(c.profile_file);
    lo = d.table->x_min();
    hi = d.table->x_max();
  }
  c.gamma = raw.gamma.value_or(base.gamma);
  c.A = raw.A.value_or(base.A);
  c.lambda = raw.lambda.value_or(base.lambda);
  c.mu1 = raw.mu1.value_or(base.mu1);
  c.nu = raw.nu.value_or(base.nu);
  c.g = raw.g.value_or(base.gravity.constant_value());
  c.margin = raw.margin ? raw.margin : margin;
  c.lo = raw.lo.value_or(lo);
  c.hi = raw.hi.value_or(hi);

  require(c.gamma >= 1.0, "params.gamma: must be >= 1");
  require(c.A > 0.0, "params.A: must be positive");
  require(c.lambda > 0.0, "params.lambda: must be positive");
  require(c.mu1 > 0.0 && c.nu > 0.0, "params.mu1, params.nu: must be positive");
  require(c.g >= 0.0, "params.g: must be >= 0");
  require(!c.margin || *c.margin > 0.0, "params.margin: must be positive");
  require(c.lo < c.hi, "params.lo, params.hi: need lo < hi");

  c.domain = parse_domain(raw.domain);
  c.strip_a = raw.strip_a;
  c.strip_b = raw.strip_b;
  c.L1 = raw.L1;
  c.L2 = raw.L2;
  require(c.strip_a < c.strip_b, "domain.strip_a, domain.strip_b: need a < b");
  require(c.L1 > 0.0 && c.L2 > 0.0, "domain.L1, domain.L2: must be positive");

  c.xi1 = raw.xi1.value_or(1.0 / c.L1);
  c.xi2 = raw.xi2.value_or(1.0 / c.L2);
  require(std::isfinite(c.xi1) && c.xi1 >= 0.0, "modes.xi1: must be finite and >= 0");
  require(std::isfinite(c.xi2) && c.xi2 >= 0.0, "modes.xi2: must be finite and >= 0");
  c.harmonics = raw.harmonics;
  require(c.harmonics >= 0, "modes.harmonics: must be >= 0");
  if (xi1_given) {
    c.xi1_values = number_list(raw.xi1_values, "modes.xi1-values");
  } else {
    for (int k = 0; k <= c.harmonics; ++k) c.xi1_values.push_back(k / c.L1);
  }
  if (xi2_given) {
    c.xi2_values = number_list(raw.xi2_values, "modes.xi2-values");
  } else {
    c.xi2_values = {0.0, 1.0 / c.L2};
  }

  c.n = raw.n;
  c.tol = raw.tol;
  require(c.n >= 8, "numerics.n: must be >= 8");
  require(c.tol > 0.0 && c.tol < 1.0, "numerics.tol: must lie in (0, 1)");
  if (raw.method) {
    c.method = parse_scan_method(*raw.method);
  } else {
    c.method = c.command == Command::growth ? ScanMethod::both : ScanMethod::qep;
  }
  c.dt = raw.dt;
  c.t_end = raw.t_end;
  c.samples = raw.samples;
  c.fit_window = raw.fit_window;
  c.init = parse_init(raw.init);
  c.seed = raw.seed;
  require(c.dt >= 0.0, "numerics.dt: must be >= 0 (0 selects the automatic step)");
  require(c.t_end > 0.0, "numerics.t-end: must be positive");
  require(c.samples >= 16, "numerics.samples: must be >= 16");
  require(c.fit_window > 0.0 && c.fit_window <= 1.0, "numerics.fit-window: must lie in (0, 1]");

  c.out_dir = raw.out_dir;
  c.format = parse_format(raw.format);
  require(!c.out_dir.empty(), "output.out-dir: must not be empty");
  return c;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

std::string list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_number(v[i]);
  return out + "]";
}

}  // namespace

std::string to_string(Command c) { return kCommands[static_cast<std::size_t>(c)]; }
std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }
std::string to_string(InitKind k) { return k == InitKind::eigen ? "eigen" : "random"; }

RunConfig parse_config_args(const std::vector<std::string>& args) {
  RawArgs raw;
  CLI::App app{"Linear stability of magnetically supported stratified atmospheres", "parker"};
  app.set_config("--config", "", "read flags from a key=value file; command-line flags win");

  app.add_option("command", raw.command, "equilibrium | criteria | growth | scan | evolve | verdict")
      ->required()
      ->check(CLI::IsMember(kCommands));

  const std::string prof = "Profile";
  app.add_option("--preset", raw.preset, "built-in equilibrium")->group(prof)->check(CLI::IsMember(preset_names()));
  app.add_option("--profile-file", raw.profile_file, "tabulated `x3 rho` rows")->group(prof)->check(CLI::ExistingFile);

  const std::string par = "Physical parameters (default: preset values)";
  app.add_option("--gamma", raw.gamma, "adiabatic index")->group(par);
  app.add_option("--A", raw.A, "P = A rho^gamma")->group(par);
  app.add_option("--lambda", raw.lambda, "magnetic permeability / 4 pi")->group(par);
  app.add_option("--mu1", raw.mu1, "shear viscosity")->group(par);
  app.add_option("--nu", raw.nu, "bulk viscosity")->group(par);
  app.add_option("--g", raw.g, "constant gravity")->group(par);
  app.add_option("--margin", raw.margin, "C - max(P + F)")->group(par);
  app.add_option("--lo", raw.lo, "bottom of the layer")->group(par);
  app.add_option("--hi", raw.hi, "top of the layer")->group(par);

  const std::string geo = "Domain";
  app.add_option("--domain", raw.domain, "slab3d | slab2d | strip")
      ->group(geo)
      ->check(CLI::IsMember({"slab3d", "slab2d", "strip"}));
  app.add_option("--strip-a", raw.strip_a, "strip lower edge")->group(geo);
  app.add_option("--strip-b", raw.strip_b, "strip upper edge")->group(geo);
  app.add_option("--L1", raw.L1, "horizontal period / 2 pi along the field")->group(geo);
  app.add_option("--L2", raw.L2, "horizontal period / 2 pi across the field")->group(geo);

  const std::string md = "Modes";
  app.add_option("--xi1", raw.xi1, "mode for growth/evolve (default 1/L1)")->group(md);
  app.add_option("--xi2", raw.xi2, "mode for growth/evolve (default 1/L2)")->group(md);
  auto* x1 = app.add_option("--xi1-values", raw.xi1_values, "scan grid (default k/L1, k = 0..harmonics)")
                 ->group(md)
                 ->delimiter(',')
                 ->expected(0, CLI::detail::expected_max_vector_size);
  auto* x2 = app.add_option("--xi2-values", raw.xi2_values, "scan grid (default 0 and 1/L2)")
                 ->group(md)
                 ->delimiter(',')
                 ->expected(0, CLI::detail::expected_max_vector_size);
  app.add_option("--harmonics", raw.harmonics, "highest harmonic in the default xi1 grid")->group(md);

  const std::string num = "Numerics";
  app.add_option("--n", raw.n, "interior grid nodes")->group(num);
  app.add_option("--tol", raw.tol, "solver tolerance")->group(num);
  app.add_option("--method", raw.method, "qep | fixed_point | both")
      ->group(num)
      ->check(CLI::IsMember({"qep", "fixed_point", "both"}));
  app.add_option("--dt", raw.dt, "time step, 0 = automatic")->group(num);
  app.add_option("--t-end", raw.t_end, "evolution end time")->group(num);
  app.add_option("--samples", raw.samples, "amplitude samples along the trajectory")->group(num);
  app.add_option("--fit-window", raw.fit_window, "trailing fraction used for the growth fit")->group(num);
  app.add_option("--init", raw.init, "eigen | random")->group(num)->check(CLI::IsMember({"eigen", "random"}));
  app.add_option("--seed", raw.seed, "random initial state seed")->group(num);

  const std::string outg = "Output";
  app.add_option("--out-dir", raw.out_dir, "output directory")->group(outg);
  app.add_option("--format", raw.format, "csv | json")->group(outg)->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    throw;
  } catch (const CLI::ParseError& e) {
    fail(Errc::InvalidArgument, e.what());
  }
  return resolve(raw, x1->count() > 0, x2->count() > 0);
}

std::optional<RunConfig> parse_config(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    return parse_config_args(args);
  } catch (const CLI::CallForHelp&) {
    return std::nullopt;
  }
}

std::string effective_config_text(const RunConfig& c) {
  std::ostringstream o;
  auto num = [&](const char* k, double v) { o << k << '=' << format_number(v) << '\n'; };
  auto str = [&](const char* k, const std::string& v) { o << k << '=' << quoted(v) << '\n'; };
  o << "# effective configuration; rerun with: parker --config <this file>\n";
  str("command", to_string(c.command));
  o << "\n# profile\n";
  if (!c.preset.empty()) str("preset", c.preset);
  if (!c.profile_file.empty()) str("profile-file", c.profile_file);
  o << "\n# params\n";
  num("gamma", c.gamma);
  num("A", c.A);
  num("lambda", c.lambda);
  num("mu1", c.mu1);
  num("nu", c.nu);
  num("g", c.g);
  if (c.margin) num("margin", *c.margin);
  num("lo", c.lo);
  num("hi", c.hi);
  o << "\n# domain\n";
  str("domain", to_string(c.domain));
  num("strip-a", c.strip_a);
  num("strip-b", c.strip_b);
  num("L1", c.L1);
  num("L2", c.L2);
  o << "\n# modes\n";
  num("xi1", c.xi1);
  num("xi2", c.xi2);
  o << "xi1-values=" << list(c.xi1_values) << '\n';
  o << "xi2-values=" << list(c.xi2_values) << '\n';
  o << "harmonics=" << c.harmonics << '\n';
  o << "\n# numerics\n";
  o << "n=" << c.n << '\n';
  num("tol", c.tol);
  str("method", to_string(c.method));
  num("dt", c.dt);
  num("t-end", c.t_end);
  o << "samples=" << c.samples << '\n';
  num("fit-window", c.fit_window);
  str("init", to_string(c.init));
  o << "seed=" << c.seed << '\n';
  o << "\n# output\n";
  str("out-dir", c.out_dir);
  str("format", to_string(c.format));
  return o.str();
}

}  // namespace parker
