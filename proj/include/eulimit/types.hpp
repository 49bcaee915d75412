#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace eulimit {

// Thrown when an operation requires a positive density but was handed vacuum.
struct VacuumStateError : std::domain_error {
  using std::domain_error::domain_error;
};

// Iterative solver failed to converge; message carries bracket diagnostics.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A computation could not reach its accuracy target.
struct AccuracyError : std::runtime_error {
  double achieved;
  AccuracyError(const std::string& what, double achieved_)
      : std::runtime_error(what), achieved(achieved_) {}
};

// Bad run configuration (CLI flags or config file).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fewer usable points than a fit requires.
struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adiabatic-exponent parameter theta = (gamma-1)/2 for the barotropic law
//   p(rho) = rho^{2*theta+1}/(2*theta+1)  (theta > 0),
//   p(rho) = rho                          (theta = 0, isothermal branch).
// theta = 1 (gamma = 3) is the top of the solver-valid range; the limit
// experiments additionally cap their ladders at kSweepMax.
class ThetaParam {
 public:
  static constexpr double kMax = 1.0;
  static constexpr double kSweepMax = 0.99;

  explicit ThetaParam(double theta) : theta_(theta) {
    if (!(theta >= 0.0) || !(theta <= kMax)) {
      throw std::domain_error("ThetaParam: theta must lie in [0, " +
                              std::to_string(kMax) + "], got " +
                              std::to_string(theta));
    }
  }

  double value() const { return theta_; }
  double gamma() const { return 1.0 + 2.0 * theta_; }
  bool isothermal() const { return theta_ == 0.0; }

 private:
  double theta_;
};

// Conserved variables (density, momentum). Vacuum is rho = 0 with m = 0.
struct ConservedState {
  double rho = 0.0;
  double m = 0.0;
};

inline ConservedState vacuum_state() { return {0.0, 0.0}; }

inline bool is_vacuum(const ConservedState& s) { return s.rho == 0.0; }

inline ConservedState make_state(double rho, double m) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw std::domain_error("make_state: density must be finite and >= 0");
  }
  if (rho == 0.0 && m != 0.0) {
    throw std::domain_error("make_state: vacuum carries zero momentum");
  }
  if (!std::isfinite(m)) {
    throw std::domain_error("make_state: momentum must be finite");
  }
  return {rho, m};
}

inline ConservedState state_from_velocity(double rho, double u) {
  if (!(rho > 0.0)) {
    throw std::domain_error("state_from_velocity: density must be > 0");
  }
  return {rho, rho * u};
}

inline double velocity(const ConservedState& s) {
  if (is_vacuum(s)) {
    throw VacuumStateError("velocity: undefined on vacuum");
  }
  return s.m / s.rho;
}

// Budget constant w0 for the invariant-region bound |u| + (rho^theta-1)/theta <= w0.
struct BoundBudget {
  double w0;
  explicit BoundBudget(double w0_) : w0(w0_) {
    if (!(w0_ > 0.0) || !std::isfinite(w0_)) {
      throw std::domain_error("BoundBudget: w0 must be finite and > 0");
    }
  }
};

// An entropy/entropy-flux pair evaluated at one state.
struct EntropyPairValue {
  double eta = 0.0;
  double q = 0.0;
};

}  // namespace eulimit
