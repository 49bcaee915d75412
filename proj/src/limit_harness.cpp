#include "eulimit/limit_harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eulimit/entropy.hpp"
#include "eulimit/gas_model.hpp"

namespace eulimit {

std::vector<double> default_theta_ladder() {
  std::vector<double> out;
  for (int k = 0; k <= 10; ++k) out.push_back(0.1 * std::ldexp(1.0, -k));
  return out;
}

void SweepConfig::validate() const {
  if (thetas.empty()) throw ConfigError("SweepConfig: thetas must be nonempty");
  for (size_t i = 0; i < thetas.size(); ++i) {
    if (!(thetas[i] > 0.0) || thetas[i] > ThetaParam::kSweepMax) {
      throw ConfigError("SweepConfig: thetas must lie in (0, 0.99]");
    }
    if (i > 0 && !(thetas[i] < thetas[i - 1])) {
      throw ConfigError("SweepConfig: thetas must be strictly decreasing");
    }
  }
  if (sample_count < 1) {
    throw ConfigError("SweepConfig: sample_count must be >= 1");
  }
  for (double xi : xi_grid) {
    if (!(std::abs(xi) < xi_main_range_bound())) {
      throw ConfigError("SweepConfig: xi_grid must lie within the main range");
    }
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t substream_key(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  return splitmix64(s);
}

}  // namespace

BudgetSampler::BudgetSampler(ThetaParam theta, BoundBudget w0,
                             std::uint64_t seed, std::uint64_t stream)
    : theta_(theta), w0_(w0), rng_(substream_key(seed, stream)) {}

double BudgetSampler::u01() {
  // 53 uniform mantissa bits; avoids distribution objects so streams replay
  // identically on any standard library
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

ConservedState BudgetSampler::next() {
  const long slot = count_++ % 20;
  if (slot == 0) return vacuum_state();
  const double u = (2.0 * u01() - 1.0) * 0.9 * w0_.w0;
  double rho;
  if (slot == 1 || slot == 2) {
    rho = 1e-6 + (1e-3 - 1e-6) * u01();
  } else {
    const double rho_max = inverse_scaled_density(theta_, w0_.w0 - std::abs(u));
    rho = rho_max * u01();
    if (!(rho > 0.0)) rho = 0.5 * rho_max;
  }
  const ConservedState s{rho, rho * u};
  if (!invariant_budget(theta_, s, w0_)) {
    throw std::logic_error("BudgetSampler: generated state violates budget");
  }
  return s;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& theta_metric) {
  RateFit out;
  for (const auto& [th, y] : theta_metric) {
    if (!(th > 0.0)) throw std::domain_error("fit_rate: theta must be > 0");
    if (y == 0.0) {
      ++out.dropped_zeros;
      continue;
    }
    if (!(y > 0.0) || !std::isfinite(y)) {
      throw std::domain_error("fit_rate: metrics must be finite and >= 0");
    }
    out.points.emplace_back(std::log(th), std::log(y));
  }
  const size_t n = out.points.size();
  if (n < 4) {
    std::ostringstream msg;
    msg << "fit_rate: " << n << " usable points (need 4); dropped "
        << out.dropped_zeros << " zeros";
    throw InsufficientDataError(msg.str());
  }
  double sx = 0, sy = 0;
  for (const auto& [x, y] : out.points) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : out.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw std::domain_error("fit_rate: degenerate theta values");
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (const auto& [x, y] : out.points) {
    const double e = y - (out.intercept + out.slope * x);
    ss_res += e * e;
    ss_tot += (y - my) * (y - my);
  }
  out.r_squared = ss_tot == 0.0 ? (ss_res == 0.0 ? 1.0 : 0.0)
                                : std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  return out;
}

namespace {

MetricFit fit_metric(const std::string& name,
                     const std::vector<std::pair<double, double>>& pts) {
  MetricFit mf;
  mf.metric = name;
  mf.flat_zero = std::all_of(pts.begin(), pts.end(),
                             [](const auto& p) { return p.second == 0.0; });
  if (!mf.flat_zero) mf.fit = fit_rate(pts);
  return mf;
}

bool fit_passes(const MetricFit& mf, double min_slope) {
  if (mf.flat_zero) return true;  // identically zero metric decays trivially
  return mf.fit.slope >= min_slope && mf.fit.r_squared >= 0.98;
}

nlohmann::json base_echo(const SweepConfig& cfg) {
  return {{"thetas", cfg.thetas},
          {"samples", cfg.sample_count},
          {"seed", cfg.seed},
          {"w0", cfg.w0.w0},
          {"xi_grid", cfg.xi_grid}};
}

}  // namespace

nlohmann::json SweepReport::summary() const {
  nlohmann::json fit_list = nlohmann::json::array();
  for (const auto& mf : fits) {
    nlohmann::json j{{"metric", mf.metric}};
    if (mf.flat_zero) {
      j["flat_zero"] = true;
    } else {
      j["slope"] = mf.fit.slope;
      j["intercept"] = mf.fit.intercept;
      j["r2"] = mf.fit.r_squared;
    }
    fit_list.push_back(std::move(j));
  }
  return {{"experiment_id", experiment_id},
          {"config", config_echo},
          {"fits", fit_list},
          {"pass", pass}};
}

SweepReport entropy_rate_sweep(const SweepConfig& config) {
  config.validate();
  constexpr double kMargin = 0.05;
  SweepReport rep;
  rep.experiment_id = "entropy_rate";
  rep.config_echo = base_echo(config);
  rep.table.columns = {"theta", "xi", "sup_gap_eta", "sup_gap_q", "sup_f_xi"};

  std::vector<std::pair<double, double>> eta_pts, q_pts, f_pts;
  bool envelope_ok = true;
  for (size_t k = 0; k < config.thetas.size(); ++k) {
    const ThetaParam th(config.thetas[k]);
    const QuadratureSpec spec = QuadratureSpec::for_theta(th.value());
    BudgetSampler sampler(th, config.w0, config.seed, k);
    std::vector<ConservedState> samples(config.sample_count);
    for (auto& s : samples) s = sampler.next();

    double eta_rung = 0.0, q_rung = 0.0, f_rung = 0.0;
    for (double xi : config.xi_grid) {
      const XiParam xp(xi);
      double sup_eta = 0.0, sup_q = 0.0, sup_f = 0.0;
      for (const auto& s : samples) {
        const auto [ge, gq] = entropy_gap(th, s, xp, config.w0, kMargin, spec);
        sup_eta = std::max(sup_eta, ge);
        sup_q = std::max(sup_q, gq);
        if (!is_vacuum(s)) {
          sup_f = std::max(sup_f, std::abs(f_xi(th, s, xp, xi)));
        }
      }
      rep.table.rows.push_back({csv_num(th.value()), csv_num(xi),
                                csv_num(sup_eta), csv_num(sup_q),
                                csv_num(sup_f)});
      eta_rung = std::max(eta_rung, sup_eta);
      q_rung = std::max(q_rung, sup_q);
      f_rung = std::max(f_rung, sup_f);
    }
    eta_pts.emplace_back(th.value(), eta_rung);
    q_pts.emplace_back(th.value(), q_rung);
    f_pts.emplace_back(th.value(), f_rung);
    if (th.value() <= 0.1) {
      const double e2w = std::exp(2.0 * config.w0.w0);
      const double env = 5.0 * std::sqrt(th.value()) * (e2w + config.w0.w0 * e2w);
      envelope_ok = envelope_ok && eta_rung <= env && q_rung <= env;
    }
  }
  rep.fits = {fit_metric("sup_gap_eta", eta_pts), fit_metric("sup_gap_q", q_pts),
              fit_metric("sup_f_xi", f_pts)};
  rep.pass = envelope_ok && fit_passes(rep.fits[0], 0.45) &&
             fit_passes(rep.fits[1], 0.45) && fit_passes(rep.fits[2], 0.9);
  return rep;
}

SweepReport energy_rate_sweep(const SweepConfig& config) {
  config.validate();
  SweepReport rep;
  rep.experiment_id = "energy_rate";
  rep.config_echo = base_echo(config);
  rep.table.columns = {"theta", "sup_gap_eta_star", "sup_gap_q_star"};

  std::vector<std::pair<double, double>> eta_pts, q_pts;
  for (size_t k = 0; k < config.thetas.size(); ++k) {
    const ThetaParam th(config.thetas[k]);
    BudgetSampler sampler(th, config.w0, config.seed, k);
    double sup_eta = 0.0, sup_q = 0.0;
    for (int i = 0; i < config.sample_count; ++i) {
      const ConservedState s = sampler.next();
      const auto [ge, gq] = energy_gap(th, s);
      sup_eta = std::max(sup_eta, ge);
      sup_q = std::max(sup_q, gq);
    }
    rep.table.rows.push_back(
        {csv_num(th.value()), csv_num(sup_eta), csv_num(sup_q)});
    eta_pts.emplace_back(th.value(), sup_eta);
    q_pts.emplace_back(th.value(), sup_q);
  }
  rep.fits = {fit_metric("sup_gap_eta_star", eta_pts),
              fit_metric("sup_gap_q_star", q_pts)};
  rep.pass = fit_passes(rep.fits[0], 0.9) && fit_passes(rep.fits[1], 0.9);
  return rep;
}

void SampleWindow::validate() const {
  if (!(t > 0.0) || !(x_max > x_min) || n_samples < 2) {
    throw ConfigError("SampleWindow: needs t > 0, x_max > x_min, n >= 2");
  }
}

namespace {

struct WindowDistance {
  double l1_rho = 0.0;
  double l1_m = 0.0;
  double combined() const { return l1_rho + l1_m; }
};

WindowDistance window_distance(const RiemannSolution& a,
                               const RiemannSolution& b, double t, double x0,
                               double x1, int n) {
  WindowDistance d;
  const double dx = (x1 - x0) / n;
  for (int j = 0; j < n; ++j) {
    const double xi = (x0 + (j + 0.5) * dx) / t;
    const ConservedState sa = a.sample(xi);
    const ConservedState sb = b.sample(xi);
    d.l1_rho += std::abs(sa.rho - sb.rho) * dx;
    d.l1_m += std::abs(sa.m - sb.m) * dx;
  }
  return d;
}

RiemannSide copy_side(const RiemannSide& s) {
  return s.vac ? RiemannSide::vacuum() : RiemannSide::of(s.rho, s.u);
}

}  // namespace

SweepReport riemann_limit_sweep(const RiemannData& data0,
                                const SampleWindow& window,
                                const SweepConfig& config) {
  config.validate();
  window.validate();
  if (data0.left.vac || data0.right.vac) {
    throw ConfigError("riemann_limit_sweep: needs non-vacuum sides");
  }
  SweepReport rep;
  rep.experiment_id = "riemann_limit";
  rep.config_echo = base_echo(config);
  rep.config_echo["window"] = {{"t", window.t},
                               {"x_min", window.x_min},
                               {"x_max", window.x_max},
                               {"n_samples", window.n_samples}};
  rep.config_echo["data"] = {{"rho_l", data0.left.rho},
                             {"u_l", data0.left.u},
                             {"rho_r", data0.right.rho},
                             {"u_r", data0.right.u}};
  rep.table.columns = {"theta", "l1_rho", "l1_m", "pattern"};

  const RiemannSolution iso = solve_riemann(
      riemann_data(ThetaParam(0.0), copy_side(data0.left), copy_side(data0.right)));
  std::vector<std::pair<double, double>> pts;
  for (double theta : config.thetas) {
    const ThetaParam th(theta);
    const RiemannSolution sol = solve_riemann(
        riemann_data(th, copy_side(data0.left), copy_side(data0.right)));
    const WindowDistance d = window_distance(sol, iso, window.t, window.x_min,
                                             window.x_max, window.n_samples);
    rep.table.rows.push_back({csv_num(theta), csv_num(d.l1_rho),
                              csv_num(d.l1_m), sol.pattern_string()});
    pts.emplace_back(theta, d.combined());
  }
  rep.fits = {fit_metric("l1_combined", pts)};
  bool monotone = true;
  for (size_t i = 1; i < pts.size(); ++i) {
    monotone = monotone && pts[i].second <= pts[i - 1].second * 1.05;
  }
  const double first = pts.front().second, last = pts.back().second;
  rep.pass = monotone && (first == 0.0 ? last == 0.0 : last <= 0.01 * first);
  return rep;
}

SweepReport decavitation_experiment(double rho_l, double u_l, double rho_r,
                                    double u_r, const SweepConfig& config) {
  config.validate();
  SweepReport rep;
  rep.experiment_id = "decavitation";
  rep.config_echo = base_echo(config);
  rep.config_echo["data"] = {
      {"rho_l", rho_l}, {"u_l", u_l}, {"rho_r", rho_r}, {"u_r", u_r}};
  rep.table.columns = {"theta", "rho_mid", "is_vacuum"};

  const std::optional<double> theta_star =
      decavitation_threshold(rho_l, u_l, rho_r, u_r);
  std::vector<double> rungs = config.thetas;
  if (theta_star) {
    for (double probe : {*theta_star + 0.01, *theta_star - 0.01}) {
      if (probe > 0.0 && probe <= ThetaParam::kSweepMax) {
        rungs.push_back(probe);
      }
    }
  }
  bool consistent = true;
  for (double theta : rungs) {
    const ThetaParam th(theta);
    const MiddleState ms = middle_state(riemann_data(
        th, RiemannSide::of(rho_l, u_l), RiemannSide::of(rho_r, u_r)));
    rep.table.rows.push_back({csv_num(theta),
                              csv_num(ms.vac ? 0.0 : ms.rho),
                              ms.vac ? "1" : "0"});
    if (theta_star) {
      if (std::abs(theta - *theta_star) > 1e-9) {
        consistent = consistent && (ms.vac == (theta > *theta_star));
      }
    } else {
      consistent = consistent && !ms.vac;
    }
  }
  rep.table.trailer.push_back(
      theta_star ? "theta_star=" + csv_num(*theta_star) : "theta_star=none");
  rep.pass = consistent;
  return rep;
}

SweepReport one_side_vacuum_experiment(double rho_r, double u_r,
                                       const SweepConfig& config) {
  config.validate();
  if (!(rho_r > 0.0)) {
    throw std::domain_error("one_side_vacuum_experiment: rho_r must be > 0");
  }
  // fixed comparison window and family scale (pinned for reproducibility)
  constexpr double kT = 1.0, kX0 = -2.0, kX1 = 1.5, kScale = 1.0;
  constexpr int kN = 8000;

  SweepReport rep;
  rep.experiment_id = "one_side_vacuum";
  rep.config_echo = base_echo(config);
  rep.config_echo["data"] = {{"rho_r", rho_r}, {"u_r", u_r}};
  rep.config_echo["window"] = {
      {"t", kT}, {"x_min", kX0}, {"x_max", kX1}, {"n_samples", kN}};
  rep.table.columns = {"theta",       "left_edge",
                       "right_edge",  "l1_rho",
                       "l1_m",        "l1_combined",
                       "l1_combined_approx", "budget_ok"};

  const RiemannSolution iso =
      one_side_vacuum_solution(ThetaParam(0.0), rho_r, u_r);
  std::vector<std::pair<double, double>> pts;
  bool budgets = true;
  for (double theta : config.thetas) {
    const ThetaParam th(theta);
    const double rp = std::pow(rho_r, theta);
    const double left_edge = u_r - rp / theta;
    const double right_edge = u_r + rp;

    const RiemannSolution sol = one_side_vacuum_solution(th, rho_r, u_r);
    const WindowDistance d = window_distance(sol, iso, kT, kX0, kX1, kN);

    const RiemannData fam = approximating_family(th, rho_r, u_r, kScale);
    const RiemannSolution fam_sol = solve_riemann(fam);
    const WindowDistance da = window_distance(fam_sol, iso, kT, kX0, kX1, kN);

    const bool ok =
        invariant_budget_log(th, fam.left.log_rho, fam.left.u, config.w0) &&
        invariant_budget(th, {rho_r, rho_r * u_r}, config.w0);
    budgets = budgets && ok;

    rep.table.rows.push_back({csv_num(theta), csv_num(left_edge),
                              csv_num(right_edge), csv_num(d.l1_rho),
                              csv_num(d.l1_m), csv_num(d.combined()),
                              csv_num(da.combined()), ok ? "1" : "0"});
    pts.emplace_back(theta, d.combined());
  }
  rep.fits = {fit_metric("l1_combined", pts)};
  const double first = pts.front().second, last = pts.back().second;
  rep.pass = budgets && (first == 0.0 ? last == 0.0 : last <= 0.01 * first);
  return rep;
}

SweepReport dissipation_uniformity_sweep(const RiemannData& data0,
                                         const Grid1D& grid,
                                         std::pair<double, double> compact_set,
                                         const SimConfig& sim,
                                         const SweepConfig& config) {
  config.validate();
  SweepReport rep;
  rep.experiment_id = "dissipation";
  rep.config_echo = base_echo(config);
  rep.config_echo["compact_set"] = {compact_set.first, compact_set.second};
  rep.config_echo["t_end"] = sim.t_end;
  rep.table.columns = {"theta", "tv_estimate", "grid_floor"};

  std::vector<double> values, floors;
  for (double theta : config.thetas) {
    const ThetaParam th(theta);
    SimConfig rc = sim;
    rc.theta = th;
    rc.keep_history = true;
    const RiemannData data =
        riemann_data(th, copy_side(data0.left), copy_side(data0.right));
    const RunResult run = run_godunov(grid, rc, riemann_initial(grid, data));
    const DissipationEstimate est =
        dissipation_tv_estimate(th, grid, run, compact_set);
    rep.table.rows.push_back({csv_num(theta), csv_num(est.tv_estimate),
                              csv_num(est.grid_floor)});
    values.push_back(est.tv_estimate);
    floors.push_back(est.grid_floor);
  }
  double ref = 0.0;
  for (size_t i = 0; i < std::min<size_t>(3, values.size()); ++i) {
    ref = std::max(ref, values[i]);
  }
  bool ok = true;
  for (size_t i = 0; i < values.size(); ++i) {
    ok = ok && values[i] <= 2.0 * ref + floors[i];
  }
  rep.pass = ok;
  return rep;
}

}  // namespace eulimit
