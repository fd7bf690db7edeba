#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

#include "json.hpp"

#include "parker/config.hpp"
#include "parker/error.hpp"

using namespace parker;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("parker_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(PARKER_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Errc parse_error(const std::vector<std::string>& args) {
  try {
    parse_config_args(args);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a validation error");
  return Errc::ZeroVector;
}

RunConfig reparse(const RunConfig& c, const std::string& name) {
  const auto path = scratch(name) / "effective.ini";
  std::ofstream(path) << effective_config_text(c);
  return parse_config_args({"--config", path.string()});
}

}  // namespace

TEST_CASE("minimal growth command fills defaults") {
  const auto c = parse_config_args({"growth", "--preset", "schwarzschild-exp", "--xi1", "0.5", "--xi2", "0.25"});
  CHECK(c.command == Command::growth);
  CHECK(c.n == 128);
  CHECK(c.tol == 1e-8);
  CHECK(c.xi1 == 0.5);
  CHECK(c.xi2 == 0.25);
  CHECK(c.method == ScanMethod::both);
  CHECK(c.preset == "schwarzschild-exp");
  CHECK(c.g == 8.0);  // from the preset
}

TEST_CASE("validation errors") {
  const auto table = scratch("table") / "rho.txt";
  std::ofstream(table) << "-1 1\n0 0.8\n1 0.6\n";
  CHECK(parse_error({"growth", "--preset", "uniform-g0", "--profile-file", table.string()}) == Errc::InvalidArgument);
  CHECK(parse_error({"growth"}) == Errc::InvalidArgument);
  CHECK(parse_error({"scan", "--preset", "uniform-g0", "--xi1-values", ""}) == Errc::InvalidArgument);
  CHECK(parse_error({"scan", "--preset", "uniform-g0", "--n", "4"}) == Errc::InvalidArgument);
  CHECK(parse_error({"fly", "--preset", "uniform-g0"}) == Errc::InvalidArgument);
  CHECK(parse_error({"growth", "--profile-file", "/nonexistent/rho.txt"}) == Errc::InvalidArgument);
  CHECK(parse_error({"growth", "--preset", "nope"}) == Errc::InvalidArgument);
}

TEST_CASE("profile files set the domain from the table") {
  const auto table = scratch("table2") / "rho.txt";
  std::ofstream(table) << "# x3 rho\n-0.5 1\n0 0.8\n0.5 0.7\n1.5 0.6\n";
  const auto c = parse_config_args({"criteria", "--profile-file", table.string(), "--g", "0.5"});
  CHECK(c.lo == -0.5);
  CHECK(c.hi == 1.5);
  CHECK(c.g == 0.5);
}

TEST_CASE("effective config round-trips") {
  const auto table = scratch("table3") / "rho.txt";
  std::ofstream(table) << "-1 1\n0 0.8\n1 0.6\n";
  const std::vector<std::vector<std::string>> cases = {
      {"growth", "--preset", "schwarzschild-exp", "--xi1", "0.5", "--xi2", "0.25"},
      {"scan", "--preset", "rt-tanh", "--xi1-values", "0,0.1,0.30000000000000004", "--xi2-values", "1",
       "--format", "json", "--margin", "0.7", "--tol", "1e-9"},
      {"evolve", "--preset", "tserkovnikov-layer", "--init", "random", "--seed", "18446744073709551615", "--dt",
       "0.001", "--t-end", "3.5", "--out-dir", "some dir/with \"quotes\""},
      {"verdict", "--profile-file", table.string(), "--domain", "strip", "--strip-a", "-0.5", "--strip-b", "0.5",
       "--gamma", "1.4", "--L1", "3.3333333333333335"},
  };
  int k = 0;
  for (const auto& args : cases) {
    CAPTURE(k);
    const auto c = parse_config_args(args);
    CHECK(reparse(c, "rt" + std::to_string(k++)) == c);
  }
}

TEST_CASE("command-line flags override the config file") {
  const auto c = parse_config_args({"scan", "--preset", "uniform-g0", "--n", "64"});
  const auto path = scratch("override") / "cfg.ini";
  std::ofstream(path) << effective_config_text(c);
  const auto d = parse_config_args({"--config", path.string(), "--n", "32"});
  CHECK(d.n == 32);
  CHECK(d.command == Command::scan);
}

TEST_CASE("equilibrium command writes a balanced profile") {
  const auto dir = scratch("eq");
  CHECK(cli("equilibrium --preset uniform-g0 --out-dir " + dir.string()) == 0);
  CHECK(fs::exists(dir / "profile.csv"));
  CHECK(fs::exists(dir / "effective.ini"));
  const auto j = nlohmann::json::parse(slurp(dir / "equilibrium.json"));
  CHECK(j["residual"].get<double>() <= j["tolerance"].get<double>());
  CHECK(j["balanced"].get<bool>());
}

TEST_CASE("verdict command reports flags and consistency") {
  const auto dir = scratch("verdict");
  CHECK(cli("verdict --preset tserkovnikov-layer --n 48 --harmonics 2 --out-dir " + dir.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "verdict.json"));
  CHECK(j["tserkovnikov_branch"].get<bool>());
  CHECK(j.contains("schwarzschild_branch"));
  CHECK(j["consistent"].get<bool>());
  CHECK(j["criteria"]["flags"]["tserkovnikov"].get<bool>());
  CHECK(fs::exists(dir / "dispersion.csv"));
}

TEST_CASE("empty scan grid exits with status 1") {
  CHECK(cli("scan --preset uniform-g0 --xi1-values \"\"") == 1);
  CHECK(cli("scan --preset uniform-g0 --profile-file /etc/hostname") == 1);
}

TEST_CASE("unstable eigen start on a stable mode is a validation error") {
  const auto dir = scratch("evolve_stable");
  CHECK(cli("evolve --preset uniform-g0 --n 32 --out-dir " + dir.string()) == 1);
}

TEST_CASE("rerun from the echo reproduces every artifact byte for byte") {
  const auto dir = scratch("rerun");
  const std::string base = "--preset schwarzschild-exp --n 32 --out-dir " + dir.string();
  CHECK(cli("scan --xi1-values 0.25,0.5 --xi2-values 1 " + base) == 0);
  CHECK(cli("evolve --init random --seed 3 --t-end 2 " + (base + "_ev")) == 0);
  for (const auto& d : {dir, fs::path(dir.string() + "_ev")}) {
    std::map<std::string, std::string> first;
    for (const auto& e : fs::directory_iterator(d)) first[e.path().filename().string()] = slurp(e.path());
    const auto echo = fs::temp_directory_path() / "parker_echo.ini";
    fs::copy_file(d / "effective.ini", echo, fs::copy_options::overwrite_existing);
    CHECK(cli("--config " + echo.string()) == 0);
    for (const auto& [name, content] : first) {
      CAPTURE(name);
      CHECK(slurp(d / name) == content);
    }
  }
  fs::remove_all(dir.string() + "_ev");
}
