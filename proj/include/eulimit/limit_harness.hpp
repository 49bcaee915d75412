#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "eulimit/godunov.hpp"
#include "eulimit/report.hpp"
#include "eulimit/riemann.hpp"
#include "eulimit/types.hpp"

namespace eulimit {

// 0.1 * 2^-k for k = 0..10 (geometric, bottom rung ~1e-4).
std::vector<double> default_theta_ladder();

struct SweepConfig {
  std::vector<double> thetas = default_theta_ladder();
  int sample_count = 400;
  std::uint64_t seed = 42;
  BoundBudget w0{2.0};
  std::vector<double> xi_grid{-0.35, -0.2, 0.2, 0.35};

  // thetas strictly decreasing within (0, ThetaParam::kSweepMax];
  // |xi| < sqrt(2) - 1 for every grid point.
  void validate() const;
};

// Uniform draws from the budget set {|u| + scaled_density <= w0}: u first,
// then rho uniform on the feasible interval for that u. Every 20th draw is
// exact vacuum and two more per 20 are near-vacuum (rho in [1e-6, 1e-3)), so
// the low-density corner is always exercised. Streams (use the theta index)
// decorrelate rungs; identical (seed, stream) replays identically.
class BudgetSampler {
 public:
  BudgetSampler(ThetaParam theta, BoundBudget w0, std::uint64_t seed,
                std::uint64_t stream);
  ConservedState next();

 private:
  double u01();
  ThetaParam theta_;
  BoundBudget w0_;
  std::mt19937_64 rng_;
  long count_ = 0;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (ln theta, ln metric)
  int dropped_zeros = 0;
};

// Ordinary least squares on (ln theta, ln metric). Exact-zero metrics are
// dropped (counted in dropped_zeros); fewer than 4 usable points throws
// InsufficientDataError; negative or non-finite metrics are a domain error.
RateFit fit_rate(const std::vector<std::pair<double, double>>& theta_metric);

struct MetricFit {
  std::string metric;
  bool flat_zero = false;  // every metric value was exactly 0; fit skipped
  RateFit fit;
};

struct SweepReport {
  std::string experiment_id;
  Table table;
  std::vector<MetricFit> fits;
  bool pass = false;
  nlohmann::json config_echo;

  // {experiment_id, config, fits: [{metric, slope, intercept, r2}], pass}
  nlohmann::json summary() const;
};

// Per theta rung: sup over budget samples, for each xi in the grid, of the
// xi-family entropy gap and of |f_xi(xi)|. CSV columns
//   theta,xi,sup_gap_eta,sup_gap_q,sup_f_xi
// Fits (sup over xi per rung): sup_gap_eta, sup_gap_q, sup_f_xi. Pass: gap
// slopes >= 0.45 and f slope >= 0.9, all with r^2 >= 0.98, and each gap
// bounded by the hard envelope 5 sqrt(theta) (e^{2 w0} + w0 e^{2 w0}) for
// theta <= 0.1.
SweepReport entropy_rate_sweep(const SweepConfig& config);

// Same sampling, metric = mechanical-energy gap between theta and 0. CSV
//   theta,sup_gap_eta_star,sup_gap_q_star
// Pass: both slopes >= 0.9 with r^2 >= 0.98.
SweepReport energy_rate_sweep(const SweepConfig& config);

struct SampleWindow {
  double t = 1.0;
  double x_min = -2.0;
  double x_max = 2.0;
  int n_samples = 3000;

  void validate() const;
};

// L1 distance (midpoint sampling over the window) between the theta-solution
// and the isothermal solution of the same two-sided data. data0's theta field
// is ignored; its sides are reused on every rung. CSV
//   theta,l1_rho,l1_m,pattern
// Pass: combined distance decays monotonically within 5% slack and ends
// <= 1% of its first-rung value.
SweepReport riemann_limit_sweep(const RiemannData& data0,
                                const SampleWindow& window,
                                const SweepConfig& config);

// Middle-state density across the ladder plus probe rungs at theta* +/- 0.01
// when the threshold exists. CSV
//   theta,rho_mid,is_vacuum      (trailer line: theta_star=<value|none>)
// Pass: vacuum middle exactly for theta >= theta* across all rows.
SweepReport decavitation_experiment(double rho_l, double u_l, double rho_r,
                                    double u_r, const SweepConfig& config);

// One-sided vacuum data (vacuum | rho_r, u_r): tracks the fan edges and the
// windowed L1 distance (x in [-2, 1.5], t = 1, 8000 midpoints) between the
// theta-solution and the isothermal one, plus the same distance for the
// approximating-family data (scale = 1), whose budget predicate must hold.
// CSV
//   theta,left_edge,right_edge,l1_rho,l1_m,l1_combined,l1_combined_approx,budget_ok
// Pass: combined distance at the smallest theta <= 1% of the largest-theta
// value, and budget_ok on every rung.
SweepReport one_side_vacuum_experiment(double rho_r, double u_r,
                                       const SweepConfig& config);

// Godunov run per rung on fixed data/grid; dissipation_tv_estimate over the
// fixed compact set. sim.theta is overridden per rung. CSV
//   theta,tv_estimate,grid_floor
// Pass: every estimate <= 2 x (max over the three largest rungs) + its grid
// floor.
SweepReport dissipation_uniformity_sweep(const RiemannData& data0,
                                         const Grid1D& grid,
                                         std::pair<double, double> compact_set,
                                         const SimConfig& sim,
                                         const SweepConfig& config);

}  // namespace eulimit
