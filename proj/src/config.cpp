#include "eulimit/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace eulimit {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("config: unknown key '" + key + "' in " + where);
    }
  }
}

double finite_number(const json& v, const std::string& where) {
  if (!v.is_number()) {
    throw ConfigError("config: " + where + " must be a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    throw ConfigError("config: " + where + " must be finite");
  }
  return x;
}

std::vector<double> finite_array(const json& v, const std::string& where) {
  if (!v.is_array()) {
    throw ConfigError("config: " + where + " must be an array");
  }
  std::vector<double> out;
  for (size_t i = 0; i < v.size(); ++i) {
    out.push_back(finite_number(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

SideSpec parse_side(const json& riemann, const std::string& rho_key,
                    const std::string& u_key) {
  SideSpec s;
  const json& rho = riemann.at(rho_key);
  if (rho.is_string()) {
    if (rho.get<std::string>() != "vacuum") {
      throw ConfigError("config: riemann." + rho_key +
                        " must be a number or \"vacuum\"");
    }
    return s;  // vacuum side; u key, if present, is ignored
  }
  s.vacuum = false;
  s.rho = finite_number(rho, "riemann." + rho_key);
  if (!(s.rho > 0.0)) {
    throw ConfigError("config: riemann." + rho_key + " must be > 0");
  }
  if (!riemann.contains(u_key)) {
    throw ConfigError("config: riemann." + u_key +
                      " required for a non-vacuum side");
  }
  s.u = finite_number(riemann.at(u_key), "riemann." + u_key);
  return s;
}

}  // namespace

RunConfigFile parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: document must be an object");
  reject_unknown(doc,
                 {"spec", "theta", "riemann", "grid", "sim", "sweep",
                  "output_dir"},
                 "top level");
  if (!doc.contains("spec") || doc.at("spec") != 1) {
    throw ConfigError("config: schema marker \"spec\": 1 required");
  }

  RunConfigFile out;
  out.raw = doc;
  if (doc.contains("theta")) {
    out.theta = finite_number(doc.at("theta"), "theta");
  }
  if (doc.contains("riemann")) {
    const json& r = doc.at("riemann");
    if (!r.is_object()) throw ConfigError("config: riemann must be an object");
    reject_unknown(r, {"rho_l", "u_l", "rho_r", "u_r"}, "riemann");
    if (!r.contains("rho_l") || !r.contains("rho_r")) {
      throw ConfigError("config: riemann needs rho_l and rho_r");
    }
    out.left = parse_side(r, "rho_l", "u_l");
    out.right = parse_side(r, "rho_r", "u_r");
  }
  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    if (!g.is_object()) throw ConfigError("config: grid must be an object");
    reject_unknown(g, {"x_min", "x_max", "n_cells", "boundary"}, "grid");
    for (const char* key : {"x_min", "x_max", "n_cells"}) {
      if (!g.contains(key)) {
        throw ConfigError(std::string("config: grid.") + key + " required");
      }
    }
    Boundary bc = Boundary::Outflow;
    if (g.contains("boundary")) {
      const std::string b = g.at("boundary").is_string()
                                ? g.at("boundary").get<std::string>()
                                : std::string();
      if (b == "outflow") {
        bc = Boundary::Outflow;
      } else if (b == "periodic") {
        bc = Boundary::Periodic;
      } else {
        throw ConfigError(
            "config: grid.boundary must be \"outflow\" or \"periodic\"");
      }
    }
    if (!g.at("n_cells").is_number_integer()) {
      throw ConfigError("config: grid.n_cells must be an integer");
    }
    out.grid = Grid1D(finite_number(g.at("x_min"), "grid.x_min"),
                      finite_number(g.at("x_max"), "grid.x_max"),
                      g.at("n_cells").get<int>(), bc);
  }
  if (doc.contains("sim")) {
    const json& s = doc.at("sim");
    if (!s.is_object()) throw ConfigError("config: sim must be an object");
    reject_unknown(s, {"cfl", "t_end", "snapshots"}, "sim");
    if (s.contains("cfl")) out.cfl = finite_number(s.at("cfl"), "sim.cfl");
    if (s.contains("t_end")) {
      out.t_end = finite_number(s.at("t_end"), "sim.t_end");
    }
    if (s.contains("snapshots")) {
      out.snapshot_times = finite_array(s.at("snapshots"), "sim.snapshots");
    }
  }
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    if (!s.is_object()) throw ConfigError("config: sweep must be an object");
    reject_unknown(s, {"thetas", "samples", "seed", "w0", "xi_grid"}, "sweep");
    out.has_sweep = true;
    if (s.contains("thetas")) {
      out.sweep.thetas = finite_array(s.at("thetas"), "sweep.thetas");
    }
    if (s.contains("samples")) {
      if (!s.at("samples").is_number_integer()) {
        throw ConfigError("config: sweep.samples must be an integer");
      }
      out.sweep.sample_count = s.at("samples").get<int>();
    }
    if (s.contains("seed")) {
      if (!s.at("seed").is_number_integer()) {
        throw ConfigError("config: sweep.seed must be an integer");
      }
      out.sweep.seed = s.at("seed").get<std::uint64_t>();
    }
    if (s.contains("w0")) {
      out.sweep.w0 = BoundBudget{finite_number(s.at("w0"), "sweep.w0")};
    }
    if (s.contains("xi_grid")) {
      out.sweep.xi_grid = finite_array(s.at("xi_grid"), "sweep.xi_grid");
    }
    out.sweep.validate();
  }
  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) {
      throw ConfigError("config: output_dir must be a string");
    }
    out.output_dir = doc.at("output_dir").get<std::string>();
  }
  return out;
}

RunConfigFile load_config_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

}  // namespace eulimit
