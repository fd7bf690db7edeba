#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "parker/scan.hpp"

namespace parker {

enum class Command { equilibrium, criteria, growth, scan, evolve, verdict };
enum class OutputFormat { csv, json };
enum class InitKind { eigen, random };

std::string to_string(Command c);
std::string to_string(OutputFormat f);
std::string to_string(InitKind k);

/// Fully resolved run description. Physical parameters are filled from the preset
/// (or library defaults for a profile file) unless overridden.
struct RunConfig {
  Command command = Command::equilibrium;
  std::string preset;
  std::string profile_file;

  double gamma = 1.0;
  double A = 1.0;
  double lambda = 1.0;
  double mu1 = 0.01;
  double nu = 0.01;
  double g = 1.0;
  std::optional<double> margin;
  double lo = -1.0;
  double hi = 1.0;

  Domain domain = Domain::slab3d;
  double strip_a = 0.0;
  double strip_b = 1.0;
  double L1 = 4.0;
  double L2 = 1.0;

  double xi1 = 0.25;
  double xi2 = 1.0;
  std::vector<double> xi1_values;
  std::vector<double> xi2_values;
  int harmonics = 16;

  int n = 128;
  double tol = 1e-8;
  ScanMethod method = ScanMethod::qep;
  double dt = 0.0;  // 0: automatic
  double t_end = 20.0;
  int samples = 400;
  double fit_window = 0.5;
  InitKind init = InitKind::eigen;
  std::uint64_t seed = 1;

  std::string out_dir = ".";
  OutputFormat format = OutputFormat::csv;

  bool operator==(const RunConfig&) const = default;
};

/// Parses command-line flags (argv[0] skipped), optionally layered over `--config FILE`.
/// Throws Error(InvalidArgument or ParseError) with the offending field named.
/// Returns nullopt when help was requested (text written to stdout).
std::optional<RunConfig> parse_config(int argc, const char* const* argv);
RunConfig parse_config_args(const std::vector<std::string>& args);

/// Flat `key=value` text that parse_config reads back to an equal RunConfig.
std::string effective_config_text(const RunConfig& cfg);

/// Runs one command; writes artifacts into cfg.out_dir.
/// Returns 0 on success, 1 for validation errors, 2 for numerical failures.
int run(const RunConfig& cfg);

}  // namespace parker
