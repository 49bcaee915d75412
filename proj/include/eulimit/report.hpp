#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace eulimit {

// Doubles serialize with 17 significant digits so CSV round-trips are
// bit-faithful.
std::string csv_num(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // cells pre-formatted
  std::vector<std::string> trailer;  // scalar lines, e.g. "theta_star=0.5"

  std::string to_csv() const;  // throws std::logic_error on ragged rows
};

// Write-temp-then-rename so concurrent readers never observe partial files.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);
void write_csv_atomic(const std::filesystem::path& path, const Table& table);

}  // namespace eulimit
