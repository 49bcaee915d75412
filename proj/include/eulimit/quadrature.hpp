#pragma once

#include <functional>
#include <vector>

#include "eulimit/types.hpp"

namespace eulimit {

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
};

// n-point Gauss-Legendre rule on [a, b].
QuadRule gauss_legendre(int n, double a, double b);

// n-point rule for the weight (1 - x^2)^lambda on [-1, 1] (Gegenbauer),
// lambda > -1. Weights sum to the weight-function integral.
QuadRule gauss_jacobi_symmetric(int n, double lambda);

// ln of the weight-function integral:  ln ∫_{-1}^{1} (1-t^2)^lambda dt
//   = ln(sqrt(pi) Gamma(lambda+1) / Gamma(lambda+3/2)).
double log_jacobi_norm(double lambda);

// Globally adaptive interval-halving integrator. Splits the interval with the
// largest error estimate (fixed Gauss-Legendre panel vs. its two halves)
// until the estimated total error is below tol. Used as the independent
// cross-check oracle in tests; not a hot-path routine.
// Throws AccuracyError when max_intervals is exhausted before reaching tol.
double adaptive_integrate(const std::function<double(double)>& f, double a,
                          double b, double tol, int max_intervals = 40000);

enum class QuadMode {
  JacobiWeight,    // fixed rule with the (1-t^2)^lambda weight built in
  GaussianLimit,   // peak-centered Gauss-Legendre window (small theta)
  AdaptiveOracle,  // adaptive interval halving (tests only)
};

struct QuadratureSpec {
  int node_count = 64;
  QuadMode mode = QuadMode::JacobiWeight;
  double tolerance = 1e-12;  // only the oracle mode reads this

  void validate() const {
    if (node_count < 8) {
      throw std::domain_error("QuadratureSpec: node_count must be >= 8");
    }
    if (!(tolerance > 0.0)) {
      throw std::domain_error("QuadratureSpec: tolerance must be > 0");
    }
  }

  // Mode selection used by default: the Jacobi weight is integrated directly
  // for theta >= 0.05; below that lambda = (1-theta)/(2 theta) is so large
  // that the weight is a narrow near-Gaussian spike and the peak-centered
  // window rule takes over.
  static QuadratureSpec for_theta(double theta) {
    QuadratureSpec spec;
    spec.mode = (theta >= 0.05) ? QuadMode::JacobiWeight : QuadMode::GaussianLimit;
    return spec;
  }
};

// Sign-aware logarithm of
//   I = ∫_{-1}^{1} pre(t) e^{a t} (1 - t^2)^lambda dt .
// The exponent a may be as large as ~1/theta; everything is evaluated with
// max-log subtraction so only the final combination can overflow. sign = 0
// together with log_abs = -inf means the integral vanished.
struct LogIntegral {
  double log_abs;
  double sign;
};

LogIntegral log_tau_integral(double lambda, double a,
                             const std::function<double(double)>& pre,
                             const QuadratureSpec& spec);

}  // namespace eulimit
