#include "eulimit/godunov.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>

#include "eulimit/gas_model.hpp"

namespace eulimit {

Grid1D::Grid1D(double a, double b, int n, Boundary bc)
    : x_min(a), x_max(b), n_cells(n), boundary(bc) {
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw ConfigError("Grid1D: needs x_max > x_min, both finite");
  }
  if (n_cells < 4) {
    throw ConfigError("Grid1D: needs at least 4 cells");
  }
}

void SimConfig::validate() const {
  if (!(cfl > 0.0) || cfl > 0.9) {
    throw ConfigError("SimConfig: cfl must lie in (0, 0.9]");
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw ConfigError("SimConfig: t_end must be finite and > 0");
  }
  for (double t : snapshot_times) {
    if (!(t >= 0.0) || t > t_end) {
      throw ConfigError("SimConfig: snapshot times must lie in [0, t_end]");
    }
  }
}

double total_mass(const Grid1D& grid, const std::vector<ConservedState>& cells) {
  double s = 0.0;
  for (const auto& c : cells) s += c.rho;
  return s * grid.dx();
}

double total_momentum(const Grid1D& grid,
                      const std::vector<ConservedState>& cells) {
  double s = 0.0;
  for (const auto& c : cells) s += c.m;
  return s * grid.dx();
}

namespace {

ConservedState side_to_state(const RiemannSide& s) {
  if (s.vac || s.rho == 0.0) return vacuum_state();
  return {s.rho, s.rho * s.u};
}

RiemannSide state_to_side(const ConservedState& s) {
  if (is_vacuum(s)) return RiemannSide::vacuum();
  return RiemannSide::of(s.rho, s.m / s.rho);
}

}  // namespace

std::vector<ConservedState> riemann_initial(const Grid1D& grid,
                                            const RiemannData& data) {
  std::vector<ConservedState> cells(grid.n_cells);
  const ConservedState l = side_to_state(data.left);
  const ConservedState r = side_to_state(data.right);
  for (int i = 0; i < grid.n_cells; ++i) {
    cells[i] = grid.center(i) < 0.0 ? l : r;
  }
  return cells;
}

std::vector<ConservedState> sample_initial(
    const Grid1D& grid, const std::function<ConservedState(double)>& f) {
  std::vector<ConservedState> cells(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) cells[i] = f(grid.center(i));
  return cells;
}

std::pair<double, double> interface_flux(ThetaParam theta,
                                         const ConservedState& left,
                                         const ConservedState& right) {
  if (is_vacuum(left) && is_vacuum(right)) return {0.0, 0.0};
  const RiemannData data =
      riemann_data(theta, state_to_side(left), state_to_side(right));
  const RiemannSolution sol = solve_riemann(data);
  return flux(theta, sol.sample(0.0));
}

double interface_speed_bound(ThetaParam theta, const ConservedState& left,
                             const ConservedState& right) {
  const bool lv = is_vacuum(left), rv = is_vacuum(right);
  if (lv && rv) return 0.0;
  auto one_side = [&](const ConservedState& s) {
    const double u = std::abs(s.m) / s.rho;
    if (theta.isothermal()) return u + 1.0;
    const double th = theta.value();
    return u + std::pow(s.rho, th) / th;
  };
  if (theta.isothermal() && (lv || rv)) {
    // isothermal fan against vacuum: density decays like e^{-|xi|}, so the
    // flux at the interface sees nothing beyond |u| + 1 + |ln eps|
    const ConservedState& s = lv ? right : left;
    return std::abs(s.m) / s.rho + 1.0 - std::log(DBL_EPSILON);
  }
  double b = 0.0;
  if (!lv) b = std::max(b, one_side(left));
  if (!rv) b = std::max(b, one_side(right));
  return b;
}

std::pair<std::vector<ConservedState>, double> godunov_step(
    const Grid1D& grid, const SimConfig& config,
    const std::vector<ConservedState>& field, double dt_cap) {
  const int n = grid.n_cells;
  if (static_cast<int>(field.size()) != n) {
    throw ConfigError("godunov_step: field size does not match grid");
  }
  if (!(dt_cap > 0.0)) {
    throw ConfigError("godunov_step: dt_cap must be > 0");
  }
  const ThetaParam theta = config.theta;
  double rho_max = 0.0;
  for (const auto& c : field) {
    if (!(c.rho >= 0.0) || !std::isfinite(c.rho) || !std::isfinite(c.m)) {
      throw SolverError("godunov_step: field contains invalid state");
    }
    rho_max = std::max(rho_max, c.rho);
  }

  auto cell = [&](int i) -> const ConservedState& {
    if (i < 0) {
      return grid.boundary == Boundary::Periodic ? field[n + i] : field[0];
    }
    if (i >= n) {
      return grid.boundary == Boundary::Periodic ? field[i - n] : field[n - 1];
    }
    return field[i];
  };

  double smax = 0.0;
  for (int i = 0; i <= n; ++i) {
    smax = std::max(smax, interface_speed_bound(theta, cell(i - 1), cell(i)));
  }
  double dt = dt_cap;
  if (smax > 0.0) dt = std::min(dt, config.cfl * grid.dx() / smax);

  std::vector<std::pair<double, double>> fluxes(n + 1);
  for (int i = 0; i <= n; ++i) {
    fluxes[i] = interface_flux(theta, cell(i - 1), cell(i));
  }

  std::vector<ConservedState> next(n);
  const double lam = dt / grid.dx();
  const double neg_tol = 1e-13 * (rho_max + 1.0);
  for (int i = 0; i < n; ++i) {
    double rho = field[i].rho - lam * (fluxes[i + 1].first - fluxes[i].first);
    double m = field[i].m - lam * (fluxes[i + 1].second - fluxes[i].second);
    if (rho <= 0.0) {
      if (rho < -neg_tol) {
        std::ostringstream msg;
        msg << "godunov_step: negative density " << rho << " in cell " << i;
        throw SolverError(msg.str());
      }
      next[i] = vacuum_state();
    } else {
      next[i] = {rho, m};
    }
  }
  return {std::move(next), dt};
}

RunResult run_godunov(const Grid1D& grid, const SimConfig& config,
                      std::vector<ConservedState> initial) {
  config.validate();
  if (static_cast<int>(initial.size()) != grid.n_cells) {
    throw ConfigError("run_godunov: initial field size does not match grid");
  }
  std::vector<double> snaps = config.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());

  RunResult out;
  double t = 0.0;
  size_t next_snap = 0;
  const double t_tol = 1e-12 * std::max(1.0, config.t_end);
  auto emit_snapshots = [&](const std::vector<ConservedState>& cells) {
    while (next_snap < snaps.size() && snaps[next_snap] <= t + t_tol) {
      out.snapshots.push_back({snaps[next_snap], cells});
      ++next_snap;
    }
  };
  emit_snapshots(initial);
  if (config.keep_history) out.history.push_back({t, initial});

  constexpr long kMaxSteps = 5000000;
  std::vector<ConservedState> cells = std::move(initial);
  while (config.t_end - t > t_tol) {
    double dt_cap = config.t_end - t;
    if (next_snap < snaps.size()) {
      dt_cap = std::min(dt_cap, snaps[next_snap] - t);
    }
    StepRecord rec;
    rec.time = t;
    rec.mass = total_mass(grid, cells);
    rec.momentum = total_momentum(grid, cells);
    double smax = 0.0;
    auto [next, dt] = godunov_step(grid, config, cells, dt_cap);
    // recover the speed bound actually used (dt may have hit dt_cap)
    for (int i = 0; i <= grid.n_cells; ++i) {
      const ConservedState& a =
          i > 0 ? cells[i - 1]
                : (grid.boundary == Boundary::Periodic ? cells.back()
                                                       : cells.front());
      const ConservedState& b =
          i < grid.n_cells
              ? cells[i]
              : (grid.boundary == Boundary::Periodic ? cells.front()
                                                     : cells.back());
      smax = std::max(smax, interface_speed_bound(config.theta, a, b));
    }
    rec.dt = dt;
    rec.max_speed = smax;
    out.steps.push_back(rec);
    cells = std::move(next);
    t += dt;
    ++out.step_count;
    if (config.keep_history) out.history.push_back({t, cells});
    emit_snapshots(cells);
    if (out.step_count > kMaxSteps) {
      throw SolverError("run_godunov: step budget exhausted (CFL collapse?)");
    }
  }
  if (out.snapshots.empty() ||
      std::abs(out.snapshots.back().time - config.t_end) > t_tol) {
    out.snapshots.push_back({config.t_end, cells});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Entropy diagnostics
// ---------------------------------------------------------------------------

EntropyPairValue evaluate_pair(ThetaParam theta, const PairSelector& sel,
                               const ConservedState& s,
                               const QuadratureSpec& spec) {
  if (is_vacuum(s)) return {0.0, 0.0};
  if (std::holds_alternative<EnergyStarSelector>(sel)) {
    return mechanical_energy_pair(theta, s);
  }
  if (const auto* x = std::get_if<XiSelector>(&sel)) {
    return theta.isothermal() ? isothermal_entropy_xi(s, x->xi)
                              : theta_entropy_xi(theta, s, x->xi, spec);
  }
  return weak_entropy_pair(theta, s, std::get<WeightSelector>(sel).weight,
                           spec);
}

namespace {

// Quintic smootherstep: C^2 with vanishing first and second derivatives at
// both ends of the ramp.
double sstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double sstep_d(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = x * (1.0 - x);
  return 30.0 * a * a;
}

struct Profile {
  double a, b, r;  // support [a, b], ramp width r
  double value(double x) const {
    if (x <= a || x >= b) return 0.0;
    double v = 1.0;
    if (x < a + r) v = sstep((x - a) / r);
    if (x > b - r) v = std::min(v, sstep((b - x) / r));
    return v;
  }
  double deriv(double x) const {
    if (x <= a || x >= b) return 0.0;
    if (x < a + r && x > b - r) {
      // overlapping ramps (tent): derivative of min of the two branches
      const double up = sstep((x - a) / r), down = sstep((b - x) / r);
      return up < down ? sstep_d((x - a) / r) / r
                       : -sstep_d((b - x) / r) / r;
    }
    if (x < a + r) return sstep_d((x - a) / r) / r;
    if (x > b - r) return -sstep_d((b - x) / r) / r;
    return 0.0;
  }
};

Profile make_profile(double a, double b, double r, const char* who) {
  if (!(r > 0.0) || !(b > a) || 2.0 * r > (b - a) * (1.0 + 1e-12)) {
    throw ConfigError(std::string(who) +
                      ": needs 0 < ramp <= (upper - lower)/2");
  }
  return {a, b, r};
}

TestFunction from_profiles(Profile px, Profile pt) {
  TestFunction f;
  f.phi = [px, pt](double x, double t) { return px.value(x) * pt.value(t); };
  f.dphi_dx = [px, pt](double x, double t) {
    return px.deriv(x) * pt.value(t);
  };
  f.dphi_dt = [px, pt](double x, double t) {
    return px.value(x) * pt.deriv(t);
  };
  return f;
}

}  // namespace

TestFunction plateau_test_function(double x0, double x1, double ramp_x,
                                   double t0, double t1, double ramp_t) {
  return from_profiles(make_profile(x0, x1, ramp_x, "plateau_test_function"),
                       make_profile(t0, t1, ramp_t, "plateau_test_function"));
}

TestFunction bump_test_function(double x_center, double half_width, double t0,
                                double t1, double ramp_t) {
  return from_profiles(make_profile(x_center - half_width,
                                    x_center + half_width, half_width,
                                    "bump_test_function"),
                       make_profile(t0, t1, ramp_t, "bump_test_function"));
}

ResidualReport entropy_residual(ThetaParam theta, const PairSelector& sel,
                                const Grid1D& grid, const RunResult& result,
                                const TestFunction& test,
                                const QuadratureSpec& spec) {
  if (result.history.size() != result.steps.size() + 1 ||
      result.steps.empty()) {
    throw ConfigError(
        "entropy_residual: needs a run recorded with keep_history = true");
  }
  const double t_first = result.history.front().time;
  const double t_last = result.history.back().time;
  // support check: phi may live at t = 0 (the initial-data term) but must
  // vanish at both x boundaries and at the final time
  for (int k = 0; k <= 4; ++k) {
    const double t = t_first + (t_last - t_first) * k / 4.0;
    if (test.phi(grid.x_min, t) != 0.0 || test.phi(grid.x_max, t) != 0.0) {
      throw std::domain_error(
          "entropy_residual: test function touches x boundary");
    }
    const double x = grid.x_min + (grid.x_max - grid.x_min) * k / 4.0;
    if (test.phi(x, t_last) != 0.0) {
      throw std::domain_error(
          "entropy_residual: test function touches final time");
    }
  }

  ResidualReport rep;
  const double dx = grid.dx();
  const auto& initial = result.history.front().cells;
  for (int i = 0; i < grid.n_cells; ++i) {
    const double p0 = test.phi(grid.center(i), t_first);
    if (p0 == 0.0) continue;
    const EntropyPairValue pv = evaluate_pair(theta, sel, initial[i], spec);
    rep.value += dx * pv.eta * p0;
    rep.eta_max = std::max(rep.eta_max, std::abs(pv.eta));
    rep.q_max = std::max(rep.q_max, std::abs(pv.q));
  }
  for (size_t k = 0; k < result.steps.size(); ++k) {
    const double dt = result.steps[k].dt;
    const double tm = result.steps[k].time + 0.5 * dt;
    const auto& cells = result.history[k].cells;
    for (int i = 0; i < grid.n_cells; ++i) {
      const double x = grid.center(i);
      const double pt = test.dphi_dt(x, tm);
      const double px = test.dphi_dx(x, tm);
      if (pt == 0.0 && px == 0.0) continue;
      const EntropyPairValue pv = evaluate_pair(theta, sel, cells[i], spec);
      rep.value += dx * dt * (pv.eta * pt + pv.q * px);
      rep.eta_max = std::max(rep.eta_max, std::abs(pv.eta));
      rep.q_max = std::max(rep.q_max, std::abs(pv.q));
    }
  }
  rep.grid_floor = 10.0 * dx * (rep.eta_max + rep.q_max);
  return rep;
}

ResidualReport entropy_residual(ThetaParam theta, const PairSelector& sel,
                                const Grid1D& grid, const RunResult& result,
                                const TestFunction& test) {
  return entropy_residual(theta, sel, grid, result, test,
                          QuadratureSpec::for_theta(theta.value()));
}

DissipationEstimate dissipation_tv_estimate(ThetaParam theta,
                                            const Grid1D& grid,
                                            const RunResult& result,
                                            std::pair<double, double> K,
                                            double pad) {
  if (!(K.first < K.second)) {
    throw std::domain_error("dissipation_tv_estimate: empty compact set");
  }
  if (result.history.size() < 2) {
    throw ConfigError(
        "dissipation_tv_estimate: needs a run with keep_history = true");
  }
  const double room =
      std::min(K.first - grid.x_min, grid.x_max - K.second);
  if (pad < 0.0) pad = 0.5 * room;
  if (!(pad > 0.0) || pad > room) {
    throw std::domain_error(
        "dissipation_tv_estimate: K + pad must stay inside the domain");
  }
  const double T = result.history.back().time;
  const Profile px = make_profile(K.first - pad, K.second + pad, pad,
                                  "dissipation_tv_estimate");
  // unit value on [0, 0.7 T], ramp down over [0.7 T, 0.9 T]
  const Profile pt = make_profile(-T, 0.9 * T, 0.2 * T,
                                  "dissipation_tv_estimate");
  const ResidualReport rep = entropy_residual(
      theta, EnergyStarSelector{}, grid, result, from_profiles(px, pt));
  return {std::max(0.0, rep.value), rep.value, rep.grid_floor};
}

}  // namespace eulimit
