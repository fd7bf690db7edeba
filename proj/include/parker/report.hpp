#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "parker/criteria.hpp"
#include "parker/profiles.hpp"

namespace parker {

/// 17 significant digits, '.' decimal separator regardless of locale.
std::string format_number(double v);

/// RFC 4180 quoting: fields with commas, quotes or line breaks are quoted, quotes doubled.
std::string csv_field(const std::string& s);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);

 private:
  std::ofstream out_;
  std::size_t width_;
};

void write_profile_csv(const EquilibriumProfile& prof, const std::filesystem::path& path);

nlohmann::json to_json(const CriteriaReport& r);

void write_json(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace parker
