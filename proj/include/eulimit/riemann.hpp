#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "eulimit/gas_model.hpp"
#include "eulimit/types.hpp"

namespace eulimit {

// One side of Riemann data. Densities small enough to underflow double are
// carried in log_rho (the approximating-family construction needs this); for
// ordinary data log_rho == log(rho).
struct RiemannSide {
  bool vac = true;
  double rho = 0.0;
  double u = 0.0;
  double log_rho = -std::numeric_limits<double>::infinity();

  static RiemannSide vacuum() { return {}; }
  static RiemannSide of(double rho, double u);
  static RiemannSide from_log(double log_rho, double u);
};

struct RiemannData {
  ThetaParam theta;
  RiemannSide left;
  RiemannSide right;
};

RiemannData riemann_data(ThetaParam theta, const RiemannSide& left,
                         const RiemannSide& right);

// Waves in similarity coordinate xi = x/t.
struct ShockWave {
  int family;    // 1 or 2
  double sigma;  // Rankine-Hugoniot speed
};
struct FanWave {
  int family;
  double head, tail;  // head <= tail; infinite edges occur for theta = 0
  double invariant;   // the Riemann invariant constant through the fan
};
struct VacuumGap {
  double left_edge, right_edge;
};
using Wave = std::variant<ShockWave, FanWave, VacuumGap>;

struct MiddleState {
  bool vac = false;
  double rho = 0.0;
  double u = 0.0;
};

enum class RegionTag { I, II, III, IV1, IV2, IV };
std::string to_string(RegionTag tag);

class RiemannSolution {
 public:
  RiemannSolution(RiemannData data, std::vector<Wave> pattern,
                  std::vector<ConservedState> states, MiddleState middle);

  const RiemannData& data() const { return data_; }
  const std::vector<Wave>& pattern() const { return pattern_; }
  const MiddleState& middle() const { return middle_; }

  // Self-similar solution at xi = x/t. Exact wave edges return the fan-side
  // value; a shock located exactly at xi returns its right (downstream) state.
  ConservedState sample(double xi) const;

  // e.g. "S1+R2", "R1+VAC+R2", "R2", "CONST"
  std::string pattern_string() const;

 private:
  RiemannData data_;
  std::vector<Wave> pattern_;
  std::vector<ConservedState> states_;  // pattern_.size() + 1 constant states
  MiddleState middle_;
};

// Forward 1-family shock branch through (rho_a, u_a):
//   u = u_a - sqrt( (1/rho_a - 1/rho) (p(rho) - p(rho_a)) )
// (valid on both sides of rho_a; admissible as a 1-shock for rho > rho_a).
double shock_curve_u(ThetaParam theta, double rho_a, double u_a, double rho);

// Rarefaction branch of the given family through (rho_a, u_a): the opposite
// Riemann invariant is constant. rho = 0 with theta = 0 diverges (+/-inf is
// returned as the divergence signal).
double rarefaction_curve_u(ThetaParam theta, int family, double rho_a,
                           double u_a, double rho);

// theta > 0 two-sided data makes vacuum iff u_L + rho_L^theta/theta <=
// u_R - rho_R^theta/theta. Always false for theta = 0.
bool vacuum_criterion(const RiemannData& data);

// Middle state of two-sided non-vacuum data (monotone curve intersection).
MiddleState middle_state(const RiemannData& data);

// Wave-pattern region of two-sided non-vacuum data.
//   I: S1+R2, II: S1+S2, III: R1+S2, IV1/IV: R1+R2 (positive middle),
//   IV2: rarefactions flanking vacuum (theta > 0 only).
// Boundary data classify to the rarefaction side (zero-strength shocks never
// appear).
RegionTag classify(const RiemannData& data);

// Full solution; handles one- and two-sided vacuum data.
RiemannSolution solve_riemann(const RiemannData& data);

// Left-vacuum data (vacuum | rho_r, u_r): a single 2-fan.
//   theta > 0: vacuum for xi <= u_r - rho_r^theta/theta, fan up to
//              u_r + rho_r^theta, the right state beyond.
//   theta = 0: fan ends at u_r + 1 and stretches to xi = -infinity with
//              rho = rho_r e^{-u_r} e^{xi - 1} (positive for all finite xi).
RiemannSolution one_side_vacuum_solution(ThetaParam theta, double rho_r,
                                         double u_r);

// Smallest theta in (1e-6, 0.99] at which the data (which must satisfy
// u_r > u_l) turns vacuous: root of F(theta) = (u_r-u_l) theta - rho_l^theta
// - rho_r^theta. nullopt when no sign change exists in the window.
std::optional<double> decavitation_threshold(double rho_l, double u_l,
                                             double rho_r, double u_r);

// Data family rho_L = scale * theta^{1/theta} (stored in log space; rho may
// underflow to 0 while log_rho stays finite), u_L chosen so the data sit on a
// single 2-rarefaction curve: u_L = u_R - (rho_R^theta - rho_L^theta)/theta.
RiemannData approximating_family(ThetaParam theta, double rho_r, double u_r,
                                 double scale);

}  // namespace eulimit
