#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "eulimit/config.hpp"
#include "eulimit/gas_model.hpp"
#include "eulimit/godunov.hpp"
#include "eulimit/limit_harness.hpp"
#include "eulimit/report.hpp"
#include "eulimit/riemann.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eulimit;

namespace {

struct Flags {
  std::string config_path;
  std::string out;
  std::string boundary = "outflow";
  double theta = 0.0;
  double rho_l = 0.0, u_l = 0.0, rho_r = 0.0, u_r = 0.0;
  double t = 1.0, xmin = -2.0, xmax = 2.0, cfl = 0.5;
  double k0 = -0.5, k1 = 0.5;
  int n = 400;
  int samples = 0;
  std::uint64_t seed = 0;
};

bool given(const CLI::App* sub, const std::string& name) {
  return sub->count(name) > 0;
}

std::optional<RunConfigFile> maybe_config(const CLI::App* sub,
                                          const Flags& f) {
  if (!given(sub, "--config")) return std::nullopt;
  return load_config_file(f.config_path);
}

fs::path resolve_out(const CLI::App* sub, const Flags& f,
                     const std::optional<RunConfigFile>& cfg) {
  if (given(sub, "--out")) return f.out;
  if (cfg && cfg->output_dir) return *cfg->output_dir;
  if (const char* env = std::getenv("EULIMIT_OUT")) return env;
  return "./out";
}

ThetaParam resolve_theta(const CLI::App* sub, const Flags& f,
                         const std::optional<RunConfigFile>& cfg) {
  if (given(sub, "--theta")) return ThetaParam(f.theta);
  if (cfg && cfg->theta) return ThetaParam(*cfg->theta);
  throw ConfigError("theta not specified (use --theta or config)");
}

RiemannSide side_from_spec(const SideSpec& s) {
  return s.vacuum ? RiemannSide::vacuum() : RiemannSide::of(s.rho, s.u);
}

RiemannSide resolve_side(const CLI::App* sub, const Flags& f,
                         const std::optional<RunConfigFile>& cfg, bool left) {
  const std::string rho_flag = left ? "--rho-l" : "--rho-r";
  const std::string u_flag = left ? "--u-l" : "--u-r";
  if (given(sub, rho_flag)) {
    if (!given(sub, u_flag)) {
      throw ConfigError(u_flag + " required with " + rho_flag);
    }
    return left ? RiemannSide::of(f.rho_l, f.u_l)
                : RiemannSide::of(f.rho_r, f.u_r);
  }
  if (cfg) {
    const auto& side = left ? cfg->left : cfg->right;
    if (side) return side_from_spec(*side);
  }
  throw ConfigError((left ? std::string("left") : std::string("right")) +
                    " Riemann state not specified (flags or config)");
}

Grid1D resolve_grid(const CLI::App* sub, const Flags& f,
                    const std::optional<RunConfigFile>& cfg) {
  if (given(sub, "--xmin") || given(sub, "--xmax") || given(sub, "--n")) {
    if (!(given(sub, "--xmin") && given(sub, "--xmax") && given(sub, "--n"))) {
      throw ConfigError("--xmin, --xmax and --n must be given together");
    }
    const Boundary bc =
        f.boundary == "periodic" ? Boundary::Periodic : Boundary::Outflow;
    return Grid1D(f.xmin, f.xmax, f.n, bc);
  }
  if (cfg && cfg->grid) return *cfg->grid;
  throw ConfigError("grid not specified (flags or config)");
}

SweepConfig resolve_sweep(const CLI::App* sub, const Flags& f,
                          const std::optional<RunConfigFile>& cfg) {
  SweepConfig sc;
  if (cfg && cfg->has_sweep) sc = cfg->sweep;
  if (given(sub, "--samples")) sc.sample_count = f.samples;
  if (given(sub, "--seed")) sc.seed = f.seed;
  sc.validate();
  return sc;
}

void write_report(const SweepReport& rep, const fs::path& dir,
                  const std::optional<RunConfigFile>& cfg) {
  SweepReport out = rep;
  if (cfg) out.config_echo = cfg->raw;
  write_csv_atomic(dir / (rep.experiment_id + ".csv"), rep.table);
  write_text_atomic(dir / (rep.experiment_id + "_summary.json"),
                    out.summary().dump(2) + "\n");
  std::cout << rep.experiment_id << ": pass=" << (rep.pass ? "true" : "false")
            << "\n";
  for (const auto& line : rep.table.trailer) std::cout << line << "\n";
}

json wave_json(const Wave& w) {
  if (const auto* s = std::get_if<ShockWave>(&w)) {
    return {{"type", "shock"}, {"family", s->family}, {"sigma", s->sigma}};
  }
  if (const auto* fan = std::get_if<FanWave>(&w)) {
    return {{"type", "fan"},
            {"family", fan->family},
            {"head", fan->head},
            {"tail", fan->tail}};
  }
  const auto& g = std::get<VacuumGap>(w);
  return {{"type", "vacuum_gap"},
          {"left_edge", g.left_edge},
          {"right_edge", g.right_edge}};
}

int cmd_riemann_solve(const CLI::App* sub, const Flags& f) {
  const auto cfg = maybe_config(sub, f);
  const ThetaParam th = resolve_theta(sub, f, cfg);
  const RiemannData data = riemann_data(th, resolve_side(sub, f, cfg, true),
                                        resolve_side(sub, f, cfg, false));
  const RiemannSolution sol = solve_riemann(data);
  json j{{"theta", th.value()}, {"pattern", sol.pattern_string()}};
  if (!data.left.vac && !data.right.vac) {
    j["region"] = to_string(classify(data));
  }
  if (sol.middle().vac) {
    j["middle"] = {{"vacuum", true}};
  } else {
    j["middle"] = {{"vacuum", false},
                   {"rho", sol.middle().rho},
                   {"u", sol.middle().u}};
  }
  json waves = json::array();
  for (const auto& w : sol.pattern()) waves.push_back(wave_json(w));
  j["waves"] = waves;
  const fs::path dir = resolve_out(sub, f, cfg);
  write_text_atomic(dir / "riemann_solution.json", j.dump(2) + "\n");
  std::cout << "pattern=" << sol.pattern_string();
  if (sol.middle().vac) {
    std::cout << " middle=vacuum\n";
  } else {
    std::cout << " middle=(" << csv_num(sol.middle().rho) << ","
              << csv_num(sol.middle().u) << ")\n";
  }
  return 0;
}

int cmd_riemann_sample(const CLI::App* sub, const Flags& f) {
  const auto cfg = maybe_config(sub, f);
  const ThetaParam th = resolve_theta(sub, f, cfg);
  const RiemannData data = riemann_data(th, resolve_side(sub, f, cfg, true),
                                        resolve_side(sub, f, cfg, false));
  if (!(f.t > 0.0) || !(f.xmax > f.xmin) || f.n < 1) {
    throw ConfigError("riemann-sample: needs --t > 0, --xmax > --xmin, --n >= 1");
  }
  const RiemannSolution sol = solve_riemann(data);
  Table tbl;
  tbl.columns = {"xi", "rho", "u", "m"};
  const double dx = (f.xmax - f.xmin) / f.n;
  for (int j = 0; j < f.n; ++j) {
    const double xi = (f.xmin + (j + 0.5) * dx) / f.t;
    const ConservedState s = sol.sample(xi);
    tbl.rows.push_back({csv_num(xi), csv_num(s.rho),
                        is_vacuum(s) ? "" : csv_num(s.m / s.rho),
                        csv_num(s.m)});
  }
  const fs::path dir = resolve_out(sub, f, cfg);
  write_csv_atomic(dir / "riemann_sample.csv", tbl);
  std::cout << "wrote " << (dir / "riemann_sample.csv").string() << "\n";
  return 0;
}

void write_snapshot(const fs::path& dir, ThetaParam th, const Grid1D& grid,
                    const FieldSnapshot& snap) {
  char name[64];
  std::snprintf(name, sizeof(name), "snap_t%.6g.csv", snap.time);
  Table tbl;
  tbl.columns = {"x", "rho", "m", "u", "w1", "w2"};
  for (int i = 0; i < grid.n_cells; ++i) {
    const ConservedState& s = snap.cells[i];
    if (is_vacuum(s)) {
      tbl.rows.push_back({csv_num(grid.center(i)), csv_num(s.rho),
                          csv_num(s.m), "", "", ""});
    } else {
      const auto [w1, w2] = riemann_invariants(th, s);
      tbl.rows.push_back({csv_num(grid.center(i)), csv_num(s.rho),
                          csv_num(s.m), csv_num(s.m / s.rho), csv_num(w1),
                          csv_num(w2)});
    }
  }
  write_csv_atomic(dir / name, tbl);
}

SimConfig resolve_sim(const CLI::App* sub, const Flags& f,
                      const std::optional<RunConfigFile>& cfg, ThetaParam th) {
  SimConfig sim;
  sim.theta = th;
  if (given(sub, "--cfl")) {
    sim.cfl = f.cfl;
  } else if (cfg && cfg->cfl) {
    sim.cfl = *cfg->cfl;
  }
  if (given(sub, "--t")) {
    sim.t_end = f.t;
  } else if (cfg && cfg->t_end) {
    sim.t_end = *cfg->t_end;
  } else {
    throw ConfigError("t_end not specified (use --t or sim.t_end)");
  }
  if (cfg) {
    sim.snapshot_times = cfg->snapshot_times;
    if (cfg->has_sweep) sim.w0 = cfg->sweep.w0;
  }
  sim.validate();
  return sim;
}

int cmd_simulate(const CLI::App* sub, const Flags& f) {
  const auto cfg = maybe_config(sub, f);
  const ThetaParam th = resolve_theta(sub, f, cfg);
  const RiemannData data = riemann_data(th, resolve_side(sub, f, cfg, true),
                                        resolve_side(sub, f, cfg, false));
  const Grid1D grid = resolve_grid(sub, f, cfg);
  const SimConfig sim = resolve_sim(sub, f, cfg, th);
  const RunResult run = run_godunov(grid, sim, riemann_initial(grid, data));
  const fs::path dir = resolve_out(sub, f, cfg);
  for (const auto& snap : run.snapshots) write_snapshot(dir, th, grid, snap);
  std::cout << "steps=" << run.step_count << " snapshots="
            << run.snapshots.size() << " final_mass="
            << csv_num(total_mass(grid, run.snapshots.back().cells)) << "\n";
  return 0;
}

int cmd_audit(const CLI::App* sub, const Flags& f) {
  const auto cfg = maybe_config(sub, f);
  const ThetaParam th = resolve_theta(sub, f, cfg);
  const RiemannData data = riemann_data(th, resolve_side(sub, f, cfg, true),
                                        resolve_side(sub, f, cfg, false));
  const Grid1D grid = resolve_grid(sub, f, cfg);
  SimConfig sim = resolve_sim(sub, f, cfg, th);
  sim.keep_history = true;
  const RunResult run = run_godunov(grid, sim, riemann_initial(grid, data));

  const double mass0 = total_mass(grid, run.history.front().cells);
  const double mom0 = total_momentum(grid, run.history.front().cells);
  double mass_drift = 0.0, mom_drift = 0.0;
  double min_rho = std::numeric_limits<double>::infinity();
  double viol_rho = -std::numeric_limits<double>::infinity();
  double viol_m = -std::numeric_limits<double>::infinity();
  const double rho_cap = std::exp(sim.w0.w0);
  for (const auto& snap : run.history) {
    mass_drift = std::max(mass_drift,
                          std::abs(total_mass(grid, snap.cells) - mass0));
    mom_drift = std::max(mom_drift,
                         std::abs(total_momentum(grid, snap.cells) - mom0));
    for (const auto& c : snap.cells) {
      min_rho = std::min(min_rho, c.rho);
      viol_rho = std::max(viol_rho, c.rho - rho_cap);
      if (c.rho > 0.0) {
        viol_m = std::max(viol_m, std::abs(c.m) - c.rho * (std::abs(std::log(
                                                               c.rho)) +
                                                           sim.w0.w0));
      }
    }
  }
  const bool periodic = grid.boundary == Boundary::Periodic;
  const double scale = 1.0 + std::abs(mass0) + std::abs(mom0);
  const bool conserved =
      !periodic || (mass_drift <= 1e-12 * scale && mom_drift <= 1e-12 * scale);
  const bool ok =
      min_rho >= 0.0 && viol_rho <= 1e-8 && viol_m <= 1e-8 && conserved;
  json j{{"steps", run.step_count},
         {"mass_drift", mass_drift},
         {"momentum_drift", mom_drift},
         {"min_rho", min_rho},
         {"budget_violation_rho", viol_rho},
         {"budget_violation_m", viol_m},
         {"w0", sim.w0.w0},
         {"conservation_checked", periodic},
         {"pass", ok}};
  const fs::path dir = resolve_out(sub, f, cfg);
  write_text_atomic(dir / "audit.json", j.dump(2) + "\n");
  std::cout << "audit: pass=" << (ok ? "true" : "false") << "\n";
  return ok ? 0 : 1;
}

int cmd_sweep_entropy(const CLI::App* sub, const Flags& f) {
  const auto cfg = maybe_config(sub, f);
  write_report(entropy_rate_sweep(resolve_sweep(sub, f, cfg)),
               resolve_out(sub, f, cfg), cfg);
  return 0;
}

int cmd_sweep_energy(const CLI::App* sub, const Flags& f) {
  const auto cfg = maybe_config(sub, f);
  write_report(energy_rate_sweep(resolve_sweep(sub, f, cfg)),
               resolve_out(sub, f, cfg), cfg);
  return 0;
}

int cmd_sweep_riemann_limit(const CLI::App* sub, const Flags& f) {
  const auto cfg = maybe_config(sub, f);
  const RiemannData data =
      riemann_data(ThetaParam(0.0), resolve_side(sub, f, cfg, true),
                   resolve_side(sub, f, cfg, false));
  SampleWindow window;
  window.t = f.t;
  window.x_min = f.xmin;
  window.x_max = f.xmax;
  window.n_samples = given(sub, "--n") ? f.n : 3000;
  write_report(riemann_limit_sweep(data, window, resolve_sweep(sub, f, cfg)),
               resolve_out(sub, f, cfg), cfg);
  return 0;
}

int cmd_decavitation(const CLI::App* sub, const Flags& f) {
  const auto cfg = maybe_config(sub, f);
  const RiemannSide l = resolve_side(sub, f, cfg, true);
  const RiemannSide r = resolve_side(sub, f, cfg, false);
  if (l.vac || r.vac) {
    throw ConfigError("decavitation: needs non-vacuum data on both sides");
  }
  write_report(
      decavitation_experiment(l.rho, l.u, r.rho, r.u, resolve_sweep(sub, f, cfg)),
      resolve_out(sub, f, cfg), cfg);
  return 0;
}

int cmd_one_side_vacuum(const CLI::App* sub, const Flags& f) {
  const auto cfg = maybe_config(sub, f);
  const RiemannSide r = resolve_side(sub, f, cfg, false);
  if (r.vac) {
    throw ConfigError("one-side-vacuum: right state must be non-vacuum");
  }
  write_report(one_side_vacuum_experiment(r.rho, r.u, resolve_sweep(sub, f, cfg)),
               resolve_out(sub, f, cfg), cfg);
  return 0;
}

int cmd_dissipation_sweep(const CLI::App* sub, const Flags& f) {
  const auto cfg = maybe_config(sub, f);
  const RiemannData data =
      riemann_data(ThetaParam(0.5), resolve_side(sub, f, cfg, true),
                   resolve_side(sub, f, cfg, false));
  const Grid1D grid = resolve_grid(sub, f, cfg);
  const SimConfig sim = resolve_sim(sub, f, cfg, ThetaParam(0.5));
  if (!(f.k0 < f.k1)) {
    throw ConfigError("dissipation-sweep: needs --k0 < --k1");
  }
  write_report(dissipation_uniformity_sweep(data, grid, {f.k0, f.k1}, sim,
                                            resolve_sweep(sub, f, cfg)),
               resolve_out(sub, f, cfg), cfg);
  return 0;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON config file");
  sub->add_option("--out", f.out, "output directory");
}

void add_data_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--rho-l", f.rho_l, "left density");
  sub->add_option("--u-l", f.u_l, "left velocity");
  sub->add_option("--rho-r", f.rho_r, "right density");
  sub->add_option("--u-r", f.u_r, "right velocity");
}

void add_grid_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--xmin", f.xmin, "left domain edge");
  sub->add_option("--xmax", f.xmax, "right domain edge");
  sub->add_option("--n", f.n, "cell or sample count");
  sub->add_option("--boundary", f.boundary, "outflow|periodic")
      ->check(CLI::IsMember({"outflow", "periodic"}));
}

void add_sweep_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--samples", f.samples, "samples per rung");
  sub->add_option("--seed", f.seed, "sweep RNG seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1-D barotropic Euler: exact Riemann solver, Godunov scheme, "
               "and isothermal-limit sweeps"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* solve = app.add_subcommand("riemann-solve", "solve one problem");
  add_common(solve, f);
  add_data_flags(solve, f);
  solve->add_option("--theta", f.theta, "pressure-law parameter");

  CLI::App* sample =
      app.add_subcommand("riemann-sample", "sample a solution on a window");
  add_common(sample, f);
  add_data_flags(sample, f);
  sample->add_option("--theta", f.theta, "pressure-law parameter");
  sample->add_option("--t", f.t, "sample time");
  add_grid_flags(sample, f);

  CLI::App* sim = app.add_subcommand("simulate", "run the Godunov scheme");
  add_common(sim, f);
  add_data_flags(sim, f);
  sim->add_option("--theta", f.theta, "pressure-law parameter");
  sim->add_option("--t", f.t, "end time");
  sim->add_option("--cfl", f.cfl, "CFL number");
  add_grid_flags(sim, f);

  CLI::App* audit =
      app.add_subcommand("audit", "run and check conservation/invariants");
  add_common(audit, f);
  add_data_flags(audit, f);
  audit->add_option("--theta", f.theta, "pressure-law parameter");
  audit->add_option("--t", f.t, "end time");
  audit->add_option("--cfl", f.cfl, "CFL number");
  add_grid_flags(audit, f);

  CLI::App* se = app.add_subcommand("sweep-entropy-rate",
                                    "xi-family entropy gap rates");
  add_common(se, f);
  add_sweep_flags(se, f);

  CLI::App* sg =
      app.add_subcommand("sweep-energy-rate", "mechanical energy gap rates");
  add_common(sg, f);
  add_sweep_flags(sg, f);

  CLI::App* sr = app.add_subcommand("sweep-riemann-limit",
                                    "Riemann solution isothermal limit");
  add_common(sr, f);
  add_data_flags(sr, f);
  add_sweep_flags(sr, f);
  sr->add_option("--t", f.t, "sample time");
  sr->add_option("--xmin", f.xmin, "window left edge");
  sr->add_option("--xmax", f.xmax, "window right edge");
  sr->add_option("--n", f.n, "window sample count");

  CLI::App* dc = app.add_subcommand("decavitation",
                                    "vacuum-threshold experiment");
  add_common(dc, f);
  add_data_flags(dc, f);
  add_sweep_flags(dc, f);

  CLI::App* ov = app.add_subcommand("one-side-vacuum",
                                    "one-sided vacuum limit experiment");
  add_common(ov, f);
  add_data_flags(ov, f);
  add_sweep_flags(ov, f);

  CLI::App* ds = app.add_subcommand("dissipation-sweep",
                                    "dissipation uniformity across theta");
  add_common(ds, f);
  add_data_flags(ds, f);
  add_sweep_flags(ds, f);
  ds->add_option("--t", f.t, "end time");
  ds->add_option("--cfl", f.cfl, "CFL number");
  add_grid_flags(ds, f);
  ds->add_option("--k0", f.k0, "compact set left edge");
  ds->add_option("--k1", f.k1, "compact set right edge");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    if (sub == solve) return cmd_riemann_solve(sub, f);
    if (sub == sample) return cmd_riemann_sample(sub, f);
    if (sub == sim) return cmd_simulate(sub, f);
    if (sub == audit) return cmd_audit(sub, f);
    if (sub == se) return cmd_sweep_entropy(sub, f);
    if (sub == sg) return cmd_sweep_energy(sub, f);
    if (sub == sr) return cmd_sweep_riemann_limit(sub, f);
    if (sub == dc) return cmd_decavitation(sub, f);
    if (sub == ov) return cmd_one_side_vacuum(sub, f);
    if (sub == ds) return cmd_dissipation_sweep(sub, f);
    throw ConfigError("unknown command");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
