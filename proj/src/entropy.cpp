#include "eulimit/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eulimit {

namespace {

double lambda_of(ThetaParam theta) {
  return (1.0 - theta.value()) / (2.0 * theta.value());
}

void require_positive_theta(ThetaParam theta, const char* who) {
  if (theta.isothermal()) {
    throw std::domain_error(std::string(who) + ": needs theta > 0");
  }
}

double horner(const std::vector<double>& c, double s) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + *it;
  return v;
}

double tabulated_value(const TabulatedWeight& w, double s) {
  if (w.s.size() < 3 || w.s.size() != w.value.size()) {
    throw std::domain_error("TabulatedWeight: need >= 3 aligned samples");
  }
  auto it = std::lower_bound(w.s.begin(), w.s.end(), s);
  size_t i = static_cast<size_t>(it - w.s.begin());
  // center a 3-point stencil around s
  if (i < 1) i = 1;
  if (i > w.s.size() - 2) i = w.s.size() - 2;
  const double x0 = w.s[i - 1], x1 = w.s[i], x2 = w.s[i + 1];
  const double y0 = w.value[i - 1], y1 = w.value[i], y2 = w.value[i + 1];
  const double l0 = (s - x1) * (s - x2) / ((x0 - x1) * (x0 - x2));
  const double l1 = (s - x0) * (s - x2) / ((x1 - x0) * (x1 - x2));
  const double l2 = (s - x0) * (s - x1) / ((x2 - x0) * (x2 - x1));
  return y0 * l0 + y1 * l1 + y2 * l2;
}

}  // namespace

double kernel_log_norm(ThetaParam theta) {
  require_positive_theta(theta, "kernel_log_norm");
  const double th = theta.value();
  return std::log(th) / th - log_jacobi_norm(lambda_of(theta));
}

double kernel_chi(const KernelPoint& p) {
  require_positive_theta(p.theta, "kernel_chi");
  if (!(p.rho >= 0.0)) {
    throw std::domain_error("kernel_chi: density must be >= 0");
  }
  if (p.rho == 0.0) return 0.0;
  const double th = p.theta.value();
  const double b = std::pow(p.rho, th) / th;
  const double d = p.s - p.u;
  const double bracket = (b - d) * (b + d);  // b^2 - d^2, cancellation-safe
  if (bracket <= 0.0) return 0.0;
  const double loga = kernel_log_norm(p.theta) +
                      lambda_of(p.theta) * std::log(bracket);
  return std::exp(loga);
}

double weight_value(const EntropyWeight& w, double s, ThetaParam theta) {
  if (const auto* poly = std::get_if<PolynomialWeight>(&w)) {
    return horner(poly->coeffs, s);
  }
  if (std::holds_alternative<EnergyStarWeight>(w)) {
    require_positive_theta(theta, "EnergyStarWeight");
    const double th = theta.value();
    return 0.5 * s * s - 1.0 / (2.0 * th * (2.0 * th + 1.0));
  }
  if (const auto* ex = std::get_if<ExpXiWeight>(&w)) {
    require_positive_theta(theta, "ExpXiWeight");
    const double lam = lambda_of(theta);
    const double c = ex->xi / (1.0 - ex->xi * ex->xi);
    const QuadratureSpec spec = QuadratureSpec::for_theta(theta.value());
    const LogIntegral den = log_tau_integral(
        lam, c / theta.value(), [](double) { return 1.0; }, spec);
    return std::exp(log_jacobi_norm(lam) - den.log_abs + c * s);
  }
  return tabulated_value(std::get<TabulatedWeight>(w), s);
}

double weight_second_derivative(const EntropyWeight& w, double s,
                                ThetaParam theta) {
  if (const auto* poly = std::get_if<PolynomialWeight>(&w)) {
    std::vector<double> dd;
    for (size_t k = 2; k < poly->coeffs.size(); ++k) {
      dd.push_back(poly->coeffs[k] * static_cast<double>(k) *
                   static_cast<double>(k - 1));
    }
    return horner(dd, s);
  }
  if (std::holds_alternative<EnergyStarWeight>(w)) return 1.0;
  if (const auto* ex = std::get_if<ExpXiWeight>(&w)) {
    const double c = ex->xi / (1.0 - ex->xi * ex->xi);
    return c * c * weight_value(w, s, theta);
  }
  const double h = 1e-4 * (1.0 + std::abs(s));
  return (weight_value(w, s + h, theta) - 2.0 * weight_value(w, s, theta) +
          weight_value(w, s - h, theta)) /
         (h * h);
}

namespace {

// Shared evaluation frame for one state: lambda, B = rho^theta/theta,
// rp = rho^theta.
struct Frame {
  double lam, b, rp, u, rho;
};

Frame make_frame(ThetaParam theta, const ConservedState& s) {
  Frame f;
  f.lam = lambda_of(theta);
  f.rho = s.rho;
  f.u = velocity(s);
  f.rp = std::pow(s.rho, theta.value());
  f.b = f.rp / theta.value();
  return f;
}

EntropyPairValue pair_from_ratio(const Frame& f, const LogIntegral& num_eta,
                                 const LogIntegral& num_q,
                                 const LogIntegral& den, double log_extra) {
  EntropyPairValue out;
  out.eta = f.rho * num_eta.sign * den.sign *
            std::exp(log_extra + num_eta.log_abs - den.log_abs);
  out.q = f.rho * num_q.sign * den.sign *
          std::exp(log_extra + num_q.log_abs - den.log_abs);
  return out;
}

}  // namespace

EntropyPairValue weak_entropy_pair(ThetaParam theta, const ConservedState& s,
                                   const EntropyWeight& psi,
                                   const QuadratureSpec& spec) {
  require_positive_theta(theta, "weak_entropy_pair");
  if (is_vacuum(s)) return {0.0, 0.0};
  const Frame f = make_frame(theta, s);

  if (const auto* ex = std::get_if<ExpXiWeight>(&psi)) {
    // psi carries its own normalization I_lambda/D_xi; arrange the logs the
    // way the definition reads: average of psi against the kernel measure.
    const double c = ex->xi / (1.0 - ex->xi * ex->xi);
    const double log_norm = log_jacobi_norm(f.lam);
    const LogIntegral den = log_tau_integral(
        f.lam, c / theta.value(), [](double) { return 1.0; }, spec);
    const LogIntegral num = log_tau_integral(
        f.lam, c * f.b, [](double) { return 1.0; }, spec);
    const LogIntegral numq = log_tau_integral(
        f.lam, c * f.b, [&](double t) { return f.u + f.rp * t; }, spec);
    const double avg_eta = num.log_abs - log_norm;   // log <e^{c B t}>
    const double norm = log_norm - den.log_abs;      // log (I_lambda/D_xi)
    EntropyPairValue out;
    out.eta = f.rho * num.sign * den.sign * std::exp(c * f.u + avg_eta + norm);
    out.q = f.rho * numq.sign * den.sign *
            std::exp(c * f.u + (numq.log_abs - log_norm) + norm);
    return out;
  }

  auto psi_s = [&](double t) {
    return weight_value(psi, f.u + f.b * t, theta);
  };
  const LogIntegral den =
      log_tau_integral(f.lam, 0.0, [](double) { return 1.0; }, spec);
  const LogIntegral num_eta = log_tau_integral(f.lam, 0.0, psi_s, spec);
  const LogIntegral num_q = log_tau_integral(
      f.lam, 0.0, [&](double t) { return (f.u + f.rp * t) * psi_s(t); }, spec);
  return pair_from_ratio(f, num_eta, num_q, den, 0.0);
}

EntropyPairValue weak_entropy_pair(ThetaParam theta, const ConservedState& s,
                                   const EntropyWeight& psi) {
  return weak_entropy_pair(theta, s, psi,
                           QuadratureSpec::for_theta(theta.value()));
}

double second_moment_identity(ThetaParam theta, const ConservedState& s,
                              const QuadratureSpec& spec) {
  require_positive_theta(theta, "second_moment_identity");
  if (is_vacuum(s)) return 0.0;
  const Frame f = make_frame(theta, s);
  const LogIntegral den =
      log_tau_integral(f.lam, 0.0, [](double) { return 1.0; }, spec);
  const LogIntegral n1 =
      log_tau_integral(f.lam, 0.0, [](double t) { return t; }, spec);
  const LogIntegral n2 =
      log_tau_integral(f.lam, 0.0, [](double t) { return t * t; }, spec);
  const double a1 = n1.sign * std::exp(n1.log_abs - den.log_abs);
  const double a2 = n2.sign * std::exp(n2.log_abs - den.log_abs);
  const double value =
      f.rho * (f.u * f.u + 2.0 * f.u * f.b * a1 + f.b * f.b * a2);
  const double th = theta.value();
  const double closed = s.m * s.m / s.rho +
                        std::pow(s.rho, 2.0 * th + 1.0) /
                            (th * (1.0 + 2.0 * th));
  const double err = std::abs(value - closed) / (1.0 + std::abs(closed));
  if (err > 1e-8) {
    throw AccuracyError("second_moment_identity: quadrature disagrees with "
                        "the closed form",
                        err);
  }
  return value;
}

double second_moment_identity(ThetaParam theta, const ConservedState& s) {
  return second_moment_identity(theta, s,
                                QuadratureSpec::for_theta(theta.value()));
}

EntropyPairValue isothermal_entropy_xi(const ConservedState& s, XiParam xi) {
  if (is_vacuum(s)) return {0.0, 0.0};
  const double u = velocity(s);
  const double d = 1.0 - xi.xi * xi.xi;
  const double eta = std::exp(std::log(s.rho) / d + xi.xi / d * u);
  return {eta, (u + xi.xi) * eta};
}

EntropyPairValue isothermal_family_pair(
    const ConservedState& s, const std::function<double(double)>& psi_over_xi,
    std::pair<double, double> support) {
  const double a = support.first, b = support.second;
  if (!(a < b) || !(a > -1.0) || !(b < 1.0)) {
    throw std::domain_error(
        "isothermal_family_pair: support must be strictly inside (-1, 1)");
  }
  if (is_vacuum(s)) return {0.0, 0.0};
  const QuadRule rule = gauss_legendre(256, a, b);
  EntropyPairValue out;
  for (size_t i = 0; i < rule.x.size(); ++i) {
    const EntropyPairValue p = isothermal_entropy_xi(s, XiParam(rule.x[i]));
    const double w = rule.w[i] * psi_over_xi(rule.x[i]);
    out.eta += w * p.eta;
    out.q += w * p.q;
  }
  return out;
}

EntropyPairValue theta_entropy_xi(ThetaParam theta, const ConservedState& s,
                                  XiParam xi, const QuadratureSpec& spec) {
  require_positive_theta(theta, "theta_entropy_xi");
  if (is_vacuum(s)) return {0.0, 0.0};
  const Frame f = make_frame(theta, s);
  const double c = xi.xi / (1.0 - xi.xi * xi.xi);
  const LogIntegral den = log_tau_integral(
      f.lam, c / theta.value(), [](double) { return 1.0; }, spec);
  const LogIntegral num = log_tau_integral(
      f.lam, c * f.b, [](double) { return 1.0; }, spec);
  const LogIntegral numq = log_tau_integral(
      f.lam, c * f.b, [&](double t) { return f.u + f.rp * t; }, spec);
  return pair_from_ratio(f, num, numq, den, c * f.u);
}

EntropyPairValue theta_entropy_xi(ThetaParam theta, const ConservedState& s,
                                  XiParam xi) {
  return theta_entropy_xi(theta, s, xi,
                          QuadratureSpec::for_theta(theta.value()));
}

double f_xi(ThetaParam theta, const ConservedState& s, XiParam xi,
            double tau) {
  require_positive_theta(theta, "f_xi");
  if (std::abs(xi.xi) > xi_main_range_bound()) {
    throw std::domain_error("f_xi: need |xi| <= sqrt(2)-1");
  }
  if (!(std::abs(tau) <= 1.0)) {
    throw std::domain_error("f_xi: need tau in [-1, 1]");
  }
  if (is_vacuum(s)) return 0.0;
  const double u = velocity(s);
  const double c = xi.xi / (1.0 - xi.xi * xi.xi);
  const double sd = scaled_density(theta, s.rho);
  // rho^{xi^2/(1-xi^2)} = e^{c xi ln rho}
  const double pw = std::exp(c * xi.xi * std::log(s.rho));
  return s.rho * std::exp(c * u) * (std::exp(c * sd * tau) - pw);
}

std::pair<double, double> entropy_gap(ThetaParam theta,
                                      const ConservedState& s, XiParam xi,
                                      const BoundBudget& w0, double margin,
                                      const QuadratureSpec& spec) {
  require_positive_theta(theta, "entropy_gap");
  xi.require_main_range(margin);
  if (!invariant_budget(theta, s, w0)) {
    throw std::domain_error("entropy_gap: state violates the w0 budget");
  }
  if (is_vacuum(s)) return {0.0, 0.0};
  const EntropyPairValue a = theta_entropy_xi(theta, s, xi, spec);
  const EntropyPairValue b = isothermal_entropy_xi(s, xi);
  return {std::abs(a.eta - b.eta), std::abs(a.q - b.q)};
}

std::pair<double, double> entropy_gap(ThetaParam theta,
                                      const ConservedState& s, XiParam xi,
                                      const BoundBudget& w0, double margin) {
  return entropy_gap(theta, s, xi, w0, margin,
                     QuadratureSpec::for_theta(theta.value()));
}

std::pair<double, double> energy_gap(ThetaParam theta,
                                     const ConservedState& s) {
  if (is_vacuum(s)) return {0.0, 0.0};
  const EntropyPairValue a = mechanical_energy_pair(theta, s);
  const EntropyPairValue b = mechanical_energy_pair(ThetaParam(0.0), s);
  return {std::abs(a.eta - b.eta), std::abs(a.q - b.q)};
}

double compatibility_residual(ThetaParam theta, const EntropyPairFn& pair,
                              const ConservedState& s, double h) {
  if (!(h > 0.0)) {
    throw std::domain_error("compatibility_residual: need h > 0");
  }
  if (!(s.rho > h)) {
    throw std::domain_error("compatibility_residual: need rho > h");
  }
  const double u = velocity(s);
  const EntropyPairValue rp = pair({s.rho + h, s.m});
  const EntropyPairValue rm = pair({s.rho - h, s.m});
  const EntropyPairValue mp = pair({s.rho, s.m + h});
  const EntropyPairValue mm = pair({s.rho, s.m - h});
  const double eta_rho = (rp.eta - rm.eta) / (2.0 * h);
  const double eta_m = (mp.eta - mm.eta) / (2.0 * h);
  const double q_rho = (rp.q - rm.q) / (2.0 * h);
  const double q_m = (mp.q - mm.q) / (2.0 * h);
  const double pprime = pressure_derivative(theta, s.rho);
  const double r1 = q_rho - eta_m * (pprime - u * u);
  const double r2 = q_m - eta_rho - 2.0 * u * eta_m;
  return std::max(std::abs(r1), std::abs(r2));
}

double compatibility_residual(ThetaParam theta, const EntropyWeight& psi,
                              const ConservedState& s, double h,
                              const QuadratureSpec& spec) {
  return compatibility_residual(
      theta,
      [&](const ConservedState& v) {
        return weak_entropy_pair(theta, v, psi, spec);
      },
      s, h);
}

double compatibility_residual(ThetaParam theta, XiParam xi,
                              const ConservedState& s, double h) {
  if (theta.isothermal()) {
    return compatibility_residual(
        theta,
        [&](const ConservedState& v) { return isothermal_entropy_xi(v, xi); },
        s, h);
  }
  return compatibility_residual(
      theta,
      [&](const ConservedState& v) { return theta_entropy_xi(theta, v, xi); },
      s, h);
}

}  // namespace eulimit
