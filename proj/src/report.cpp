#include "eulimit/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace eulimit {

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Table::to_csv() const {
  std::string out;
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size()) {
      throw std::logic_error("Table::to_csv: row width mismatch");
    }
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  for (const auto& line : trailer) {
    out += line;
    out += '\n';
  }
  return out;
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw std::runtime_error("write_text_atomic: cannot open " +
                               tmp.string());
    }
    f << content;
    f.flush();
    if (!f) {
      throw std::runtime_error("write_text_atomic: write failed for " +
                               tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

void write_csv_atomic(const std::filesystem::path& path, const Table& table) {
  write_text_atomic(path, table.to_csv());
}

}  // namespace eulimit
