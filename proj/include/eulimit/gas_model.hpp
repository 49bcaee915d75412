#pragma once

#include <utility>

#include "eulimit/types.hpp"

namespace eulimit {

// Barotropic pressure law. p(0) = 0 on both branches.
double pressure(ThetaParam theta, double rho);

// dp/drho = rho^{2 theta}; equals 1 on the isothermal branch.
double pressure_derivative(ThetaParam theta, double rho);

// c(rho) = rho^theta for theta > 0, c == 1 for theta = 0.
double sound_speed(ThetaParam theta, double rho);

// Scaled density (rho^theta - 1)/theta, the quantity that stays O(1) as
// theta -> 0 (it tends to ln rho). Evaluated as expm1(theta*ln rho)/theta so
// it is accurate down to theta = 1e-12 and beyond.
//   theta > 0, rho = 0  ->  -1/theta
//   theta = 0, rho = 0  ->  -infinity (signal value, not an error)
double scaled_density(ThetaParam theta, double rho);

// Inverse of scaled_density in rho: returns rho with (rho^theta-1)/theta = v.
// Values below the branch minimum (-1/theta) clamp to 0.
double inverse_scaled_density(ThetaParam theta, double v);

// (rho^a - 1)/a for a > 0, continuous limit ln(rho) as a -> 0. Shared by the
// scaled density (a = theta) and the mechanical energy (a = 2 theta).
double power_diff_quotient(double a, double rho);

// Riemann invariants:
//   theta > 0:  w1 = u + rho^theta/theta,  w2 = u - rho^theta/theta
//   theta = 0:  w1 = rho e^{u},            w2 = rho e^{-u}
// Throws VacuumStateError on vacuum (no velocity label).
std::pair<double, double> riemann_invariants(ThetaParam theta,
                                             const ConservedState& s);

// |u| + scaled_density(rho); -infinity on vacuum (so every budget holds).
double budget_value(ThetaParam theta, const ConservedState& s);

// Invariant-region membership |u| + (rho^theta-1)/theta <= w0.
// Vacuum is always inside.
bool invariant_budget(ThetaParam theta, const ConservedState& s,
                      const BoundBudget& budget);

// Same predicate with the density supplied as log(rho), for data whose
// density underflows double (the approximating-family left states).
bool invariant_budget_log(ThetaParam theta, double log_rho, double u,
                          const BoundBudget& budget);

// Bounds implied by the budget: rho <= e^{w0} and |m| <= rho(|ln rho| + w0).
bool within_density_bound(const ConservedState& s, const BoundBudget& budget);
bool within_momentum_bound(const ConservedState& s, const BoundBudget& budget);

// Flux F(U) = (m, m^2/rho + p(rho)); (0,0) on vacuum.
std::pair<double, double> flux(ThetaParam theta, const ConservedState& s);

// Characteristic speeds u -/+ c. Vacuum: (0,0) for theta > 0 (sound speed
// vanishes, velocity label 0); VacuumStateError for theta = 0 (c == 1 never
// degenerates, the state needs rho > 0).
std::pair<double, double> eigenvalues(ThetaParam theta,
                                      const ConservedState& s);

// Mechanical energy pair
//   eta* = m^2/(2 rho) + rho (rho^{2theta} - 1)/(2theta (2theta+1))
//   q*   = m^3/(2 rho^2) + m ((rho^{2theta}-1)/(2theta) + 1/(2theta+1))
// with the exact theta = 0 limits
//   eta*0 = m^2/(2 rho) + rho ln rho,   q*0 = m^3/(2 rho^2) + m (ln rho + 1).
// Vacuum maps to (0, 0).
EntropyPairValue mechanical_energy_pair(ThetaParam theta,
                                        const ConservedState& s);

}  // namespace eulimit
