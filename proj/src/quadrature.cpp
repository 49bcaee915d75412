#include "eulimit/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <queue>

namespace eulimit {

namespace {

struct GslInit {
  GslInit() { gsl_set_error_handler_off(); }
};
const GslInit gsl_init_once;

// GSL workspaces are cheap relative to the eigen-decomposition they hide;
// cache the node sets since the entropy machinery asks for the same
// (n, lambda) thousands of times inside a sweep.
QuadRule gauss_legendre_unit(int n) {
  static std::mutex mu;
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  gsl_integration_glfixed_table* tab =
      gsl_integration_glfixed_table_alloc(static_cast<size_t>(n));
  if (tab == nullptr) {
    throw std::runtime_error("gauss_legendre: table allocation failed");
  }
  QuadRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double xi = 0.0, wi = 0.0;
    gsl_integration_glfixed_point(-1.0, 1.0, static_cast<size_t>(i), &xi, &wi,
                                  tab);
    rule.x[i] = xi;
    rule.w[i] = wi;
  }
  gsl_integration_glfixed_table_free(tab);
  return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace

QuadRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::domain_error("gauss_legendre: n must be >= 1");
  QuadRule unit = gauss_legendre_unit(n);
  QuadRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const double mid = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.x[i] = mid + hw * unit.x[i];
    rule.w[i] = hw * unit.w[i];
  }
  return rule;
}

QuadRule gauss_jacobi_symmetric(int n, double lambda) {
  if (n < 1) throw std::domain_error("gauss_jacobi_symmetric: n must be >= 1");
  if (!(lambda > -1.0)) {
    throw std::domain_error("gauss_jacobi_symmetric: lambda must be > -1");
  }
  static std::mutex mu;
  static std::map<std::pair<int, double>, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, lambda);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  gsl_integration_fixed_workspace* ws = gsl_integration_fixed_alloc(
      gsl_integration_fixed_jacobi, static_cast<size_t>(n), -1.0, 1.0, lambda,
      lambda);
  if (ws == nullptr) {
    throw std::runtime_error("gauss_jacobi_symmetric: workspace alloc failed");
  }
  QuadRule rule;
  rule.x.assign(gsl_integration_fixed_nodes(ws),
                gsl_integration_fixed_nodes(ws) + n);
  rule.w.assign(gsl_integration_fixed_weights(ws),
                gsl_integration_fixed_weights(ws) + n);
  gsl_integration_fixed_free(ws);
  return cache.emplace(key, std::move(rule)).first->second;
}

double log_jacobi_norm(double lambda) {
  if (!(lambda > -1.0)) {
    throw std::domain_error("log_jacobi_norm: lambda must be > -1");
  }
  return 0.5 * std::log(M_PI) + std::lgamma(lambda + 1.0) -
         std::lgamma(lambda + 1.5);
}

namespace {

double panel(const std::function<double(double)>& f, double a, double b) {
  // 15-point Gauss-Legendre panel.
  const QuadRule& unit = gauss_legendre_unit(15);
  const double mid = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double s = 0.0;
  for (size_t i = 0; i < unit.x.size(); ++i) {
    s += unit.w[i] * f(mid + hw * unit.x[i]);
  }
  return hw * s;
}

struct Interval {
  double a, b, value, err;
  bool operator<(const Interval& o) const { return err < o.err; }
};

Interval make_interval(const std::function<double(double)>& f, double a,
                       double b) {
  const double whole = panel(f, a, b);
  const double mid = 0.5 * (a + b);
  const double halves = panel(f, a, mid) + panel(f, mid, b);
  return {a, b, halves, std::abs(whole - halves)};
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a,
                          double b, double tol, int max_intervals) {
  if (!(b > a)) throw std::domain_error("adaptive_integrate: need b > a");
  std::priority_queue<Interval> queue;
  queue.push(make_interval(f, a, b));
  double total_err = queue.top().err;
  int count = 1;
  const double min_width = (b - a) * 1e-15;
  while (total_err > tol && count < max_intervals) {
    Interval worst = queue.top();
    if (worst.b - worst.a <= min_width) break;  // resolution floor
    queue.pop();
    total_err -= worst.err;
    const double mid = 0.5 * (worst.a + worst.b);
    Interval left = make_interval(f, worst.a, mid);
    Interval right = make_interval(f, mid, worst.b);
    queue.push(left);
    queue.push(right);
    total_err += left.err + right.err;
    ++count;
  }
  if (total_err > tol && count >= max_intervals) {
    throw AccuracyError("adaptive_integrate: interval budget exhausted",
                        total_err);
  }
  double sum = 0.0;
  while (!queue.empty()) {
    sum += queue.top().value;
    queue.pop();
  }
  return sum;
}

namespace {

// Stationary point of E(t) = a t + lambda ln(1 - t^2) on (-1, 1):
// E'(t) = 0  <=>  t/(1-t^2) = a/(2 lambda), a quadratic with one root inside.
double peak_location(double lambda, double a) {
  if (lambda <= 0.0) return 0.0;
  const double r = a / (2.0 * lambda);
  if (std::abs(r) < 1e-10) return r;  // series: t = r - r^3 + ...
  return (-1.0 + std::sqrt(1.0 + 4.0 * r * r)) / (2.0 * r);
}

LogIntegral log_sum(const std::vector<double>& terms, double shift) {
  double s = 0.0;
  for (double t : terms) s += t;
  if (s == 0.0) {
    return {-std::numeric_limits<double>::infinity(), 0.0};
  }
  return {shift + std::log(std::abs(s)), s > 0.0 ? 1.0 : -1.0};
}

}  // namespace

LogIntegral log_tau_integral(double lambda, double a,
                             const std::function<double(double)>& pre,
                             const QuadratureSpec& spec) {
  spec.validate();
  switch (spec.mode) {
    case QuadMode::JacobiWeight: {
      const QuadRule rule = gauss_jacobi_symmetric(spec.node_count, lambda);
      // Weight (1-t^2)^lambda lives in rule.w; only e^{a t} needs shifting.
      double shift = -std::numeric_limits<double>::infinity();
      for (double t : rule.x) shift = std::max(shift, a * t);
      if (!std::isfinite(shift)) shift = 0.0;
      std::vector<double> terms(rule.x.size());
      for (size_t i = 0; i < rule.x.size(); ++i) {
        terms[i] = rule.w[i] * pre(rule.x[i]) * std::exp(a * rule.x[i] - shift);
      }
      return log_sum(terms, shift);
    }
    case QuadMode::GaussianLimit: {
      const double tstar = peak_location(lambda, a);
      const double curv =
          2.0 * lambda * (1.0 + tstar * tstar) /
          ((1.0 - tstar * tstar) * (1.0 - tstar * tstar));
      const double width = (curv > 0.0) ? 1.0 / std::sqrt(curv) : 1.0;
      const double eps = 1e-15;
      const double lo = std::max(-1.0 + eps, tstar - 12.0 * width);
      const double hi = std::min(1.0 - eps, tstar + 12.0 * width);
      const QuadRule rule = gauss_legendre(spec.node_count, lo, hi);
      const double eshift =
          a * tstar + lambda * std::log1p(-tstar * tstar);
      std::vector<double> terms(rule.x.size());
      for (size_t i = 0; i < rule.x.size(); ++i) {
        const double t = rule.x[i];
        const double e = a * t + lambda * std::log1p(-t * t) - eshift;
        terms[i] = rule.w[i] * pre(t) * std::exp(e);
      }
      return log_sum(terms, eshift);
    }
    case QuadMode::AdaptiveOracle: {
      const double tstar = peak_location(lambda, a);
      const double eshift =
          a * tstar + lambda * std::log1p(-tstar * tstar);
      auto g = [&](double t) {
        const double one_minus = 1.0 - t * t;
        if (one_minus <= 0.0) return 0.0;
        const double e = a * t + lambda * std::log(one_minus) - eshift;
        if (e < -745.0) return 0.0;
        return pre(t) * std::exp(e);
      };
      const double val = adaptive_integrate(g, -1.0, 1.0, spec.tolerance);
      if (val == 0.0) {
        return {-std::numeric_limits<double>::infinity(), 0.0};
      }
      return {eshift + std::log(std::abs(val)), val > 0.0 ? 1.0 : -1.0};
    }
  }
  throw std::logic_error("log_tau_integral: unknown mode");
}

}  // namespace eulimit
