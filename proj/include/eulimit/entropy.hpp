#pragma once

#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "eulimit/gas_model.hpp"
#include "eulimit/quadrature.hpp"
#include "eulimit/types.hpp"

namespace eulimit {

// ---------------------------------------------------------------------------
// Weak-entropy kernel
// ---------------------------------------------------------------------------

struct KernelPoint {
  ThetaParam theta;  // must satisfy theta > 0
  double rho;
  double u;
  double s;
};

// chi(s; rho, u) = a_theta [ (rho^theta/theta)^2 - (s-u)^2 ]_+^lambda with
// lambda = (1-theta)/(2 theta) and a_theta = theta^{1/theta} / I_lambda,
// I_lambda = ∫ (1-t^2)^lambda dt. Normalized so ∫ chi ds = rho. Evaluated in
// log space: a_theta underflows for small theta but the bracket compensates.
double kernel_chi(const KernelPoint& p);

// ln a_theta; exposed for tests.
double kernel_log_norm(ThetaParam theta);

// ---------------------------------------------------------------------------
// Entropy generators psi
// ---------------------------------------------------------------------------

struct PolynomialWeight {
  std::vector<double> coeffs;  // psi(s) = sum coeffs[k] s^k
};

// psi*(s) = s^2/2 - 1/(2 theta (2 theta + 1)); generates the mechanical
// energy pair (the theta-dependent constant is applied at evaluation time).
struct EnergyStarWeight {};

// psi_xi(s) = (I_lambda / D_xi) e^{(xi/(1-xi^2)) s} with D_xi the weighted
// normalizer; generates the theta-side xi-family.
struct ExpXiWeight {
  double xi;
  explicit ExpXiWeight(double xi_) : xi(xi_) {
    if (!(std::abs(xi_) < 1.0)) {
      throw std::domain_error("ExpXiWeight: need |xi| < 1");
    }
  }
};

// Samples on a strictly increasing grid; evaluated by local quadratic
// interpolation. Intended for roundtripping externally supplied generators.
struct TabulatedWeight {
  std::vector<double> s;
  std::vector<double> value;
};

using EntropyWeight =
    std::variant<PolynomialWeight, EnergyStarWeight, ExpXiWeight,
                 TabulatedWeight>;

// psi(s). theta only matters for EnergyStarWeight's constant and the
// ExpXiWeight normalization.
double weight_value(const EntropyWeight& w, double s, ThetaParam theta);

// psi''(s) (exact for polynomial/energy/exp, finite-difference for tables).
double weight_second_derivative(const EntropyWeight& w, double s,
                                ThetaParam theta);

// ---------------------------------------------------------------------------
// xi parameter
// ---------------------------------------------------------------------------

// sqrt(2) - 1: the xi-family satisfies the entropy inequality uniformly in
// theta exactly when 2|xi|/(1-xi^2) <= 1, i.e. |xi| <= sqrt(2)-1.
inline double xi_main_range_bound() { return std::sqrt(2.0) - 1.0; }

struct XiParam {
  double xi;
  explicit XiParam(double xi_) : xi(xi_) {
    if (!(std::abs(xi_) < 1.0)) {
      throw std::domain_error("XiParam: need |xi| < 1");
    }
  }
  // Enforce |xi| <= sqrt(2)-1-margin for operations whose estimates only hold
  // on the main range.
  void require_main_range(double margin) const {
    if (!(margin > 0.0)) {
      throw std::domain_error("XiParam: margin must be > 0");
    }
    if (std::abs(xi) > xi_main_range_bound() - margin) {
      throw std::domain_error("XiParam: xi outside the main range with margin");
    }
  }
};

// ---------------------------------------------------------------------------
// Entropy pairs
// ---------------------------------------------------------------------------

// Weak entropy pair generated by psi (theta > 0):
//   eta = rho <psi(u + (rho^theta/theta) t)>_lambda
//   q   = rho <(u + rho^theta t) psi(u + (rho^theta/theta) t)>_lambda
// where <.>_lambda is the probability average against (1-t^2)^lambda.
// Vacuum maps to (0,0).
EntropyPairValue weak_entropy_pair(ThetaParam theta, const ConservedState& s,
                                   const EntropyWeight& psi,
                                   const QuadratureSpec& spec);
EntropyPairValue weak_entropy_pair(ThetaParam theta, const ConservedState& s,
                                   const EntropyWeight& psi);

// ∫ s^2 chi ds computed by quadrature; checked internally against the closed
// form m^2/rho + rho^{2 theta + 1}/(theta (1 + 2 theta)) (AccuracyError when
// the two disagree beyond 1e-8 relative). theta > 0.
double second_moment_identity(ThetaParam theta, const ConservedState& s,
                              const QuadratureSpec& spec);
double second_moment_identity(ThetaParam theta, const ConservedState& s);

// Isothermal xi-family (theta = 0):
//   eta_xi = rho^{1/(1-xi^2)} e^{(xi/(1-xi^2)) u},  q_xi = (u + xi) eta_xi.
// Vacuum maps to (0,0).
EntropyPairValue isothermal_entropy_xi(const ConservedState& s, XiParam xi);

// Superposition over the family: ( ∫ eta_xi psi(xi) dxi, ∫ q_xi psi(xi) dxi )
// for psi supported in [support.first, support.second] ⊂⊂ (-1, 1).
EntropyPairValue isothermal_family_pair(
    const ConservedState& s, const std::function<double(double)>& psi_over_xi,
    std::pair<double, double> support);

// theta-side xi-family: ratio of integrals
//   eta^theta_xi = rho e^{c u} ∫ e^{c B t} w(t) dt / ∫ e^{(c/theta) t} w(t) dt
//   q^theta_xi   = same with prefactor (u + rho^theta t) in the numerator,
// where c = xi/(1-xi^2), B = rho^theta/theta, w(t) = (1-t^2)^lambda.
// Equals weak_entropy_pair(ExpXiWeight(xi)). Vacuum maps to (0,0).
EntropyPairValue theta_entropy_xi(ThetaParam theta, const ConservedState& s,
                                  XiParam xi, const QuadratureSpec& spec);
EntropyPairValue theta_entropy_xi(ThetaParam theta, const ConservedState& s,
                                  XiParam xi);

// f_xi(tau) = rho e^{(xi/(1-xi^2)) u} ( e^{(xi/(1-xi^2)) sd tau} -
//             rho^{xi^2/(1-xi^2)} ),  sd = (rho^theta-1)/theta.
// The quantity whose smallness at tau = xi controls the isothermal limit.
// Requires theta > 0 and |xi| <= sqrt(2)-1.
double f_xi(ThetaParam theta, const ConservedState& s, XiParam xi, double tau);

// (|eta^theta_xi - eta_xi|, |q^theta_xi - q_xi|). Preconditions: the state
// satisfies the w0 budget, and |xi| <= sqrt(2)-1-margin.
std::pair<double, double> entropy_gap(ThetaParam theta,
                                      const ConservedState& s, XiParam xi,
                                      const BoundBudget& w0, double margin,
                                      const QuadratureSpec& spec);
std::pair<double, double> entropy_gap(ThetaParam theta,
                                      const ConservedState& s, XiParam xi,
                                      const BoundBudget& w0, double margin);

// (|eta*^theta - eta*^0|, |q*^theta - q*^0|) at one state (closed forms).
std::pair<double, double> energy_gap(ThetaParam theta,
                                     const ConservedState& s);

// Max of the two compatibility defects
//   |d q/d rho - d eta/d m (p' - u^2)|,  |d q/d m - d eta/d rho - 2 u d eta/d m|
// with central differences of step h. Requires rho > h.
using EntropyPairFn = std::function<EntropyPairValue(const ConservedState&)>;
double compatibility_residual(ThetaParam theta, const EntropyPairFn& pair,
                              const ConservedState& s, double h);
double compatibility_residual(ThetaParam theta, const EntropyWeight& psi,
                              const ConservedState& s, double h,
                              const QuadratureSpec& spec);
double compatibility_residual(ThetaParam theta, XiParam xi,
                              const ConservedState& s, double h);

}  // namespace eulimit
