#include "parker/report.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "parker/error.hpp"

namespace parker {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  if (ec != std::errc()) fail(Errc::InvalidArgument, "number formatting failed");
  return std::string(buf.data(), end);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), width_(header.size()) {
  if (!out_) fail(Errc::InvalidArgument, "cannot open " + path.string() + " for writing");
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != width_) fail(Errc::InvalidArgument, "CSV row width mismatch");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << csv_field(fields[i]);
  }
  out_ << "\r\n";
}

void write_profile_csv(const EquilibriumProfile& prof, const std::filesystem::path& path) {
  CsvWriter w(path, {"x3", "rho", "drho", "pressure", "m", "m2", "m2prime", "g"});
  const ProfileSamples& s = prof.closed;
  for (std::size_t i = 0; i < s.size(); ++i) {
    w.row({format_number(s.x[i]), format_number(s.rho[i]), format_number(s.drho[i]),
           format_number(s.pressure[i]), format_number(s.m[i]), format_number(s.m2[i]),
           format_number(s.m2prime[i]), format_number(s.g[i])});
  }
}

nlohmann::json to_json(const CriteriaReport& r) {
  nlohmann::json j;
  j["schwarzschild_margin"] = r.schwarzschild_margin;
  j["buoyancy"] = r.buoyancy;
  j["tserkovnikov_margin"] = r.tserkovnikov_margin;
  j["rt_margin"] = r.rt_margin;
  j["varpi"] = r.varpi;
  j["strip_bound"] = r.strip_bound;
  j["strip_stable_sufficient"] = r.strip_stable_sufficient;
  j["kappa"] = r.kappa;
  j["xi2d"] = r.xi2d;
  j["xi3d"] = r.xi3d;
  j["flags"] = {{"schwarzschild", r.schwarzschild},
                {"tserkovnikov", r.tserkovnikov},
                {"rayleigh_taylor", r.rayleigh_taylor},
                {"buoyancy", r.buoyancy_holds}};
  return j;
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::InvalidArgument, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

}  // namespace parker
