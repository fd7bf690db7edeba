#include "doctest.h"

#include <charconv>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "parker/presets.hpp"
#include "parker/report.hpp"

using namespace parker;

TEST_CASE("numbers keep 17 significant digits and round-trip") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-2.5e-300) == "-2.5e-300");
  CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double v = d(rng);
    const std::string s = format_number(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
    CHECK(s.find(',') == std::string::npos);
  }
}

TEST_CASE("non-finite numbers") {
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("CSV quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("profile CSV has one row per closed node") {
  const auto prof = build_preset("rt-tanh", 16);
  const auto path = std::filesystem::temp_directory_path() / "parker_profile.csv";
  write_profile_csv(prof, path);
  std::ifstream in(path);
  std::string line;
  int rows = 0;
  std::getline(in, line);
  CHECK(line == "x3,rho,drho,pressure,m,m2,m2prime,g\r");
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 18);
}

TEST_CASE("criteria JSON carries flags and thresholds") {
  const auto prof = build_preset("schwarzschild-exp", 32);
  const auto j = to_json(evaluate_criteria(prof, 0.0, 1.0, 1.0));
  CHECK(j["flags"]["schwarzschild"].get<bool>());
  CHECK(j["xi3d"].get<double>() > 0.0);
  CHECK(j.contains("kappa"));
}
