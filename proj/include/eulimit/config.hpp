#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "eulimit/godunov.hpp"
#include "eulimit/limit_harness.hpp"
#include "eulimit/types.hpp"

namespace eulimit {

// One datum side as written in a config file: a number or the literal string
// "vacuum".
struct SideSpec {
  bool vacuum = true;
  double rho = 0.0;
  double u = 0.0;
};

// Parsed run configuration. Sections are optional; each command validates
// that the sections it needs are present. `raw` keeps the exact parsed
// document for summary echoes (round-trips to an identical config).
struct RunConfigFile {
  std::optional<double> theta;
  std::optional<SideSpec> left, right;
  std::optional<Grid1D> grid;
  std::optional<double> cfl;
  std::optional<double> t_end;
  std::vector<double> snapshot_times;
  bool has_sweep = false;
  SweepConfig sweep;  // defaults overlaid with any keys present
  std::optional<std::string> output_dir;
  nlohmann::json raw;
};

// Requires the schema marker `"spec": 1`; rejects unknown keys at every
// level; every number must be finite; densities accept "vacuum".
// Violations throw ConfigError.
RunConfigFile parse_config(const nlohmann::json& doc);
RunConfigFile load_config_file(const std::filesystem::path& path);

}  // namespace eulimit
