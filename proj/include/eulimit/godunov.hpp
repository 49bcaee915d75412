#pragma once

#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "eulimit/entropy.hpp"
#include "eulimit/riemann.hpp"
#include "eulimit/types.hpp"

namespace eulimit {

enum class Boundary { Outflow, Periodic };

struct Grid1D {
  double x_min = -1.0;
  double x_max = 1.0;
  int n_cells = 100;
  Boundary boundary = Boundary::Outflow;

  Grid1D() = default;
  Grid1D(double a, double b, int n, Boundary bc = Boundary::Outflow);

  double dx() const { return (x_max - x_min) / n_cells; }
  double center(int i) const { return x_min + (i + 0.5) * dx(); }
};

struct SimConfig {
  ThetaParam theta{0.5};
  double cfl = 0.5;       // in (0, 0.9]
  double t_end = 0.0;     // > 0
  BoundBudget w0{2.0};    // budget for invariant-region audits of the run
  std::vector<double> snapshot_times;  // extra outputs; final state is implicit
  bool keep_history = false;           // store the field at every step

  void validate() const;
};

struct FieldSnapshot {
  double time = 0.0;
  std::vector<ConservedState> cells;
};

struct StepRecord {
  double time = 0.0;       // at the start of the step
  double dt = 0.0;
  double max_speed = 0.0;  // signal-speed bound used for the CFL condition
  double mass = 0.0;       // dx * sum(rho), before the step
  double momentum = 0.0;   // dx * sum(m), before the step
};

struct RunResult {
  std::vector<FieldSnapshot> snapshots;  // requested times plus the final state
  std::vector<FieldSnapshot> history;    // per-step fields when keep_history
  std::vector<StepRecord> steps;
  long step_count = 0;
};

double total_mass(const Grid1D& grid, const std::vector<ConservedState>& cells);
double total_momentum(const Grid1D& grid,
                      const std::vector<ConservedState>& cells);

// Cell data for a Riemann problem centered at x = 0.
std::vector<ConservedState> riemann_initial(const Grid1D& grid,
                                            const RiemannData& data);
std::vector<ConservedState> sample_initial(
    const Grid1D& grid, const std::function<ConservedState(double)>& f);

// Godunov flux: F evaluated on the self-similar solution along x/t = 0.
std::pair<double, double> interface_flux(ThetaParam theta,
                                         const ConservedState& left,
                                         const ConservedState& right);

// Signal-speed bound for one interface. theta > 0: |u| + rho^theta/theta on
// each side (covers fan edges, including expansion into vacuum). theta = 0:
// |u| + 1, except that a fan opening against vacuum formally has unbounded
// edge speed; the bound |u| + 1 - ln(eps) covers everything the flux at the
// interface can see above relative density eps = DBL_EPSILON.
double interface_speed_bound(ThetaParam theta, const ConservedState& left,
                             const ConservedState& right);

// One forward-Euler Godunov step. Returns the updated field and the dt used
// (CFL-limited, additionally capped by dt_cap). Densities driven below zero
// by roundoff (within -1e-13 relative) clamp to vacuum; anything more
// negative throws SolverError.
std::pair<std::vector<ConservedState>, double> godunov_step(
    const Grid1D& grid, const SimConfig& config,
    const std::vector<ConservedState>& field, double dt_cap);

RunResult run_godunov(const Grid1D& grid, const SimConfig& config,
                      std::vector<ConservedState> initial);

// ---------------------------------------------------------------------------
// Entropy diagnostics
// ---------------------------------------------------------------------------

// Which entropy pair to evaluate along a run.
struct EnergyStarSelector {};            // mechanical energy pair, any theta
struct XiSelector {                      // xi-family pair; dispatches on theta
  XiParam xi;
};
struct WeightSelector {                  // weak pair from a weight, theta > 0
  EntropyWeight weight;
};
using PairSelector =
    std::variant<EnergyStarSelector, XiSelector, WeightSelector>;

EntropyPairValue evaluate_pair(ThetaParam theta, const PairSelector& sel,
                               const ConservedState& s,
                               const QuadratureSpec& spec);

// Smooth compactly supported test function phi(x, t) >= 0 with exact partial
// derivatives, built from quintic smootherstep ramps (C^2).
struct TestFunction {
  std::function<double(double, double)> phi;
  std::function<double(double, double)> dphi_dx;
  std::function<double(double, double)> dphi_dt;
};

// 1 on [x0 + ramp_x, x1 - ramp_x] x [t0 + ramp_t, t1 - ramp_t], 0 outside
// [x0, x1] x [t0, t1]. Requires 0 < ramp_x <= (x1-x0)/2 and likewise in t.
TestFunction plateau_test_function(double x0, double x1, double ramp_x,
                                   double t0, double t1, double ramp_t);
// Tent-shaped in x (peak at x_center, support radius half_width), plateau in t.
TestFunction bump_test_function(double x_center, double half_width, double t0,
                                double t1, double ramp_t);

struct ResidualReport {
  double value = 0.0;       // weak-form integral, >= 0 for entropy solutions
  double eta_max = 0.0;     // sup |eta| over evaluated cells
  double q_max = 0.0;
  double grid_floor = 0.0;  // 10 dx (eta_max + q_max), the discretization slack
};

// Weak-form residual of the entropy inequality over a stored run:
//   R = sum_k sum_i dx dt_k [ eta(U_i^k) phi_t(x_i, t_k + dt_k/2)
//                           + q(U_i^k)  phi_x(x_i, t_k + dt_k/2) ]
//     + sum_i dx eta(U_i^0) phi(x_i, 0),
// the midpoint discretization of ∬(eta phi_t + q phi_x) + ∫eta(U_0)phi(.,0).
// An entropy solution has R >= 0 for phi >= 0 (R is the phi-weighted mass of
// the dissipation measure); the scheme satisfies this up to -grid_floor.
// Requires result.history (run with keep_history = true). phi may be nonzero
// at t = 0 but must vanish at x_min, x_max, and t_end (checked on boundary
// samples; std::domain_error otherwise).
ResidualReport entropy_residual(ThetaParam theta, const PairSelector& sel,
                                const Grid1D& grid, const RunResult& result,
                                const TestFunction& test,
                                const QuadratureSpec& spec);
ResidualReport entropy_residual(ThetaParam theta, const PairSelector& sel,
                                const Grid1D& grid, const RunResult& result,
                                const TestFunction& test);

// Estimate of the dissipation-measure mass over the spatial set K, via the
// mechanical-energy residual against a plateau cutoff: phi = 1 on K x [0,
// 0.7 t_end], ramps to 0 spatially over `pad` (default: half the distance
// from K to the nearest boundary) and temporally by 0.9 t_end. Raw residual
// kept alongside; tv_estimate clamps it at 0.
struct DissipationEstimate {
  double tv_estimate = 0.0;  // max(0, raw_value)
  double raw_value = 0.0;
  double grid_floor = 0.0;
};
DissipationEstimate dissipation_tv_estimate(ThetaParam theta,
                                            const Grid1D& grid,
                                            const RunResult& result,
                                            std::pair<double, double> K,
                                            double pad = -1.0);

}  // namespace eulimit
