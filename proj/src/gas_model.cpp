#include "eulimit/gas_model.hpp"

#include <cmath>
#include <limits>

namespace eulimit {

namespace {
void require_nonnegative_density(double rho, const char* who) {
  if (!(rho >= 0.0)) {
    throw std::domain_error(std::string(who) + ": density must be >= 0");
  }
}
}  // namespace

double power_diff_quotient(double a, double rho) {
  if (rho == 0.0) {
    return a > 0.0 ? -1.0 / a : -std::numeric_limits<double>::infinity();
  }
  if (a == 0.0) return std::log(rho);
  return std::expm1(a * std::log(rho)) / a;
}

double pressure(ThetaParam theta, double rho) {
  require_nonnegative_density(rho, "pressure");
  if (rho == 0.0) return 0.0;
  if (theta.isothermal()) return rho;
  const double g = theta.gamma();  // 2 theta + 1
  return std::pow(rho, g) / g;
}

double pressure_derivative(ThetaParam theta, double rho) {
  require_nonnegative_density(rho, "pressure_derivative");
  if (theta.isothermal()) return 1.0;
  if (rho == 0.0) return 0.0;
  return std::pow(rho, 2.0 * theta.value());
}

double sound_speed(ThetaParam theta, double rho) {
  require_nonnegative_density(rho, "sound_speed");
  if (theta.isothermal()) return 1.0;
  if (rho == 0.0) return 0.0;
  return std::pow(rho, theta.value());
}

double scaled_density(ThetaParam theta, double rho) {
  require_nonnegative_density(rho, "scaled_density");
  return power_diff_quotient(theta.value(), rho);
}

double inverse_scaled_density(ThetaParam theta, double v) {
  if (theta.isothermal()) return std::exp(v);
  const double arg = theta.value() * v;
  if (arg <= -1.0) return 0.0;
  return std::exp(std::log1p(arg) / theta.value());
}

std::pair<double, double> riemann_invariants(ThetaParam theta,
                                             const ConservedState& s) {
  if (is_vacuum(s)) {
    throw VacuumStateError("riemann_invariants: undefined on vacuum");
  }
  const double u = velocity(s);
  if (theta.isothermal()) {
    return {s.rho * std::exp(u), s.rho * std::exp(-u)};
  }
  const double a = std::pow(s.rho, theta.value()) / theta.value();
  return {u + a, u - a};
}

double budget_value(ThetaParam theta, const ConservedState& s) {
  if (is_vacuum(s)) return -std::numeric_limits<double>::infinity();
  return std::abs(velocity(s)) + scaled_density(theta, s.rho);
}

bool invariant_budget(ThetaParam theta, const ConservedState& s,
                      const BoundBudget& budget) {
  return budget_value(theta, s) <= budget.w0;
}

bool invariant_budget_log(ThetaParam theta, double log_rho, double u,
                          const BoundBudget& budget) {
  const double sd = theta.isothermal()
                        ? log_rho
                        : std::expm1(theta.value() * log_rho) / theta.value();
  return std::abs(u) + sd <= budget.w0;
}

bool within_density_bound(const ConservedState& s, const BoundBudget& budget) {
  return s.rho <= std::exp(budget.w0);
}

bool within_momentum_bound(const ConservedState& s, const BoundBudget& budget) {
  if (is_vacuum(s)) return true;
  return std::abs(s.m) <= s.rho * (std::abs(std::log(s.rho)) + budget.w0);
}

std::pair<double, double> flux(ThetaParam theta, const ConservedState& s) {
  if (is_vacuum(s)) return {0.0, 0.0};
  const double u = velocity(s);
  return {s.m, s.m * u + pressure(theta, s.rho)};
}

std::pair<double, double> eigenvalues(ThetaParam theta,
                                      const ConservedState& s) {
  if (is_vacuum(s)) {
    if (theta.isothermal()) {
      throw VacuumStateError("eigenvalues: isothermal branch needs rho > 0");
    }
    return {0.0, 0.0};
  }
  const double u = velocity(s);
  const double c = sound_speed(theta, s.rho);
  return {u - c, u + c};
}

EntropyPairValue mechanical_energy_pair(ThetaParam theta,
                                        const ConservedState& s) {
  if (is_vacuum(s)) return {0.0, 0.0};
  const double u = velocity(s);
  // (rho^{2 theta} - 1)/(2 theta), with the ln(rho) limit built in.
  const double pd = power_diff_quotient(2.0 * theta.value(), s.rho);
  const double inv_g = 1.0 / theta.gamma();  // 1/(2 theta + 1)
  EntropyPairValue out;
  out.eta = 0.5 * s.m * u + s.rho * pd * inv_g;
  out.q = 0.5 * s.m * u * u + s.m * (pd + inv_g);
  return out;
}

}  // namespace eulimit
