#include "eulimit/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace eulimit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Waves with a relative density jump below this are zero-strength artifacts
// of the root solve and are dropped from patterns.
constexpr double kDropTol = 1e-9;

double rho_pow_theta(ThetaParam theta, const RiemannSide& s) {
  // via log_rho so log-space data (underflowed rho) keep working
  return std::exp(theta.value() * s.log_rho);
}

void require_two_sided(const RiemannData& d, const char* who) {
  if (d.left.vac || d.right.vac) {
    throw std::domain_error(std::string(who) +
                            ": needs non-vacuum data on both sides");
  }
}

}  // namespace

RiemannSide RiemannSide::of(double rho, double u) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw std::domain_error("RiemannSide::of: density must be finite and > 0");
  }
  RiemannSide s;
  s.vac = false;
  s.rho = rho;
  s.u = u;
  s.log_rho = std::log(rho);
  return s;
}

RiemannSide RiemannSide::from_log(double log_rho, double u) {
  if (!std::isfinite(log_rho)) {
    throw std::domain_error("RiemannSide::from_log: log_rho must be finite");
  }
  RiemannSide s;
  s.vac = false;
  s.rho = std::exp(log_rho);  // may underflow to 0; log_rho stays authoritative
  s.u = u;
  s.log_rho = log_rho;
  return s;
}

RiemannData riemann_data(ThetaParam theta, const RiemannSide& left,
                         const RiemannSide& right) {
  return {theta, left, right};
}

std::string to_string(RegionTag tag) {
  switch (tag) {
    case RegionTag::I: return "I";
    case RegionTag::II: return "II";
    case RegionTag::III: return "III";
    case RegionTag::IV1: return "IV1";
    case RegionTag::IV2: return "IV2";
    case RegionTag::IV: return "IV";
  }
  return "?";
}

double shock_curve_u(ThetaParam theta, double rho_a, double u_a, double rho) {
  if (!(rho_a > 0.0) || !(rho > 0.0)) {
    throw std::domain_error("shock_curve_u: densities must be > 0");
  }
  const double jump =
      (1.0 / rho_a - 1.0 / rho) * (pressure(theta, rho) - pressure(theta, rho_a));
  return u_a - std::sqrt(std::max(jump, 0.0));
}

double rarefaction_curve_u(ThetaParam theta, int family, double rho_a,
                           double u_a, double rho) {
  if (family != 1 && family != 2) {
    throw std::domain_error("rarefaction_curve_u: family must be 1 or 2");
  }
  if (!(rho_a > 0.0) || !(rho >= 0.0)) {
    throw std::domain_error("rarefaction_curve_u: bad densities");
  }
  const double sgn = (family == 1) ? 1.0 : -1.0;
  if (theta.isothermal()) {
    if (rho == 0.0) return sgn * kInf;  // divergence signal
    return u_a + sgn * std::log(rho_a / rho);
  }
  const double th = theta.value();
  return u_a + sgn * (std::pow(rho_a, th) - std::pow(rho, th)) / th;
}

bool vacuum_criterion(const RiemannData& data) {
  require_two_sided(data, "vacuum_criterion");
  if (data.theta.isothermal()) return false;
  const double th = data.theta.value();
  const double xi1 = data.left.u + rho_pow_theta(data.theta, data.left) / th;
  const double xi2 = data.right.u - rho_pow_theta(data.theta, data.right) / th;
  return xi1 <= xi2;
}

namespace {

// Forward 1-curve through the left state and backward 2-curve through the
// right state, parameterized by the middle density.
double curve_u1(const RiemannData& d, double rho) {
  if (rho >= d.left.rho) {
    return shock_curve_u(d.theta, d.left.rho, d.left.u, rho);
  }
  return rarefaction_curve_u(d.theta, 1, d.left.rho, d.left.u, rho);
}

double curve_u2(const RiemannData& d, double rho) {
  if (rho >= d.right.rho) {
    const double jump = (1.0 / rho - 1.0 / d.right.rho) *
                        (pressure(d.theta, d.right.rho) - pressure(d.theta, rho));
    return d.right.u + std::sqrt(std::max(jump, 0.0));
  }
  return rarefaction_curve_u(d.theta, 2, d.right.rho, d.right.u, rho);
}

struct PhiFn {
  const RiemannData& d;
  double operator()(double rho) const {
    return curve_u1(d, rho) - curve_u2(d, rho);
  }
};

}  // namespace

MiddleState middle_state(const RiemannData& data) {
  require_two_sided(data, "middle_state");
  if (vacuum_criterion(data)) {
    MiddleState m;
    m.vac = true;
    return m;
  }
  const PhiFn phi{data};
  const double rtol =
      1e-12 * (1.0 + std::abs(data.left.u) + std::abs(data.right.u));

  // Exact-data short circuits (single-wave data solve exactly).
  if (std::abs(curve_u1(data, data.right.rho) - data.right.u) <= rtol) {
    return {false, data.right.rho, data.right.u};
  }
  if (std::abs(curve_u2(data, data.left.rho) - data.left.u) <= rtol) {
    return {false, data.left.rho, data.left.u};
  }

  // Bracket: phi is strictly decreasing, positive near rho = 0 (the vacuum
  // criterion fails), negative for large rho.
  double lo = std::min(data.left.rho, data.right.rho);
  double hi = std::max(data.left.rho, data.right.rho);
  double flo = phi(lo);
  double fhi = phi(hi);
  int guard = 0;
  while (flo < 0.0 && guard++ < 1100) {
    lo *= 0.5;
    flo = phi(lo);
  }
  guard = 0;
  while (fhi > 0.0 && guard++ < 1100) {
    hi *= 2.0;
    fhi = phi(hi);
  }
  if (flo < 0.0 || fhi > 0.0) {
    std::ostringstream msg;
    msg << "middle_state: failed to bracket (lo=" << lo << ", hi=" << hi
        << ", phi(lo)=" << flo << ", phi(hi)=" << fhi << ")";
    throw SolverError(msg.str());
  }

  // Illinois variant of regula falsi with a bisection safeguard.
  double a = lo, b = hi, fa = flo, fb = fhi;
  double x = 0.5 * (a + b), fx = phi(x);
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(fx) <= rtol) break;
    if (fx > 0.0) {
      a = x;
      fa = fx;
      if (side == 1) fb *= 0.5;
      side = 1;
    } else {
      b = x;
      fb = fx;
      if (side == -1) fa *= 0.5;
      side = -1;
    }
    const double denom = fa - fb;
    double next = (denom != 0.0) ? (a * (-fb) + b * fa) / denom
                                 : 0.5 * (a + b);
    if (!(next > a) || !(next < b)) next = 0.5 * (a + b);
    x = next;
    fx = phi(x);
    if (b - a <= 1e-15 * std::max(1.0, x)) break;
  }
  if (std::abs(fx) > rtol && (b - a) > 1e-12 * std::max(1.0, x)) {
    std::ostringstream msg;
    msg << "middle_state: no convergence (rho=" << x << ", phi=" << fx
        << ", bracket=[" << a << "," << b << "])";
    throw SolverError(msg.str());
  }
  return {false, x, 0.5 * (curve_u1(data, x) + curve_u2(data, x))};
}

RegionTag classify(const RiemannData& data) {
  require_two_sided(data, "classify");
  const MiddleState m = middle_state(data);
  if (m.vac) return RegionTag::IV2;
  const bool s1 = m.rho > data.left.rho * (1.0 + kDropTol);
  const bool s2 = m.rho > data.right.rho * (1.0 + kDropTol);
  if (s1 && s2) return RegionTag::II;
  if (s1) return RegionTag::I;
  if (s2) return RegionTag::III;
  return data.theta.isothermal() ? RegionTag::IV : RegionTag::IV1;
}

namespace {

ConservedState side_state(const RiemannSide& s) {
  if (s.vac || s.rho == 0.0) return vacuum_state();
  return {s.rho, s.rho * s.u};
}

double fan_invariant(ThetaParam theta, int family, double rho, double u,
                     double log_rho) {
  if (theta.isothermal()) {
    return family == 1 ? rho * std::exp(u) : rho * std::exp(-u);
  }
  const double a = std::exp(theta.value() * log_rho) / theta.value();
  return family == 1 ? u + a : u - a;
}

ConservedState fan_state(ThetaParam theta, const FanWave& fan, double xi) {
  if (theta.isothermal()) {
    const double rho = fan.family == 1 ? fan.invariant * std::exp(-xi - 1.0)
                                       : fan.invariant * std::exp(xi - 1.0);
    const double u = fan.family == 1 ? xi + 1.0 : xi - 1.0;
    return rho > 0.0 ? ConservedState{rho, rho * u} : vacuum_state();
  }
  const double th = theta.value();
  const double arg = (fan.family == 1 ? th * (fan.invariant - xi)
                                      : th * (xi - fan.invariant)) /
                     (1.0 + th);
  if (!(arg > 0.0)) return vacuum_state();
  const double rho = std::exp(std::log(arg) / th);
  if (!(rho > 0.0)) return vacuum_state();
  const double u = (xi + th * fan.invariant) / (1.0 + th);
  return {rho, rho * u};
}

std::pair<double, double> wave_speed_range(const Wave& w) {
  if (const auto* s = std::get_if<ShockWave>(&w)) return {s->sigma, s->sigma};
  if (const auto* f = std::get_if<FanWave>(&w)) return {f->head, f->tail};
  const auto& g = std::get<VacuumGap>(w);
  return {g.left_edge, g.right_edge};
}

// Characteristic speed of the given family from (rho, u) via log_rho.
double lam(ThetaParam theta, int family, double u, double log_rho) {
  const double c =
      theta.isothermal() ? 1.0 : std::exp(theta.value() * log_rho);
  return family == 1 ? u - c : u + c;
}

}  // namespace

RiemannSolution::RiemannSolution(RiemannData data, std::vector<Wave> pattern,
                                 std::vector<ConservedState> states,
                                 MiddleState middle)
    : data_(std::move(data)),
      pattern_(std::move(pattern)),
      states_(std::move(states)),
      middle_(middle) {
  if (states_.size() != pattern_.size() + 1) {
    throw std::logic_error("RiemannSolution: states/pattern size mismatch");
  }
}

ConservedState RiemannSolution::sample(double xi) const {
  for (size_t i = 0; i < pattern_.size(); ++i) {
    const auto [lo, hi] = wave_speed_range(pattern_[i]);
    if (xi < lo) return states_[i];
    if (xi <= hi) {
      if (const auto* fan = std::get_if<FanWave>(&pattern_[i])) {
        return fan_state(data_.theta, *fan, xi);
      }
      if (std::holds_alternative<VacuumGap>(pattern_[i])) {
        return vacuum_state();
      }
      return states_[i + 1];  // shock at exactly xi: downstream state
    }
  }
  return states_.back();
}

std::string RiemannSolution::pattern_string() const {
  if (pattern_.empty()) return "CONST";
  std::string out;
  for (size_t i = 0; i < pattern_.size(); ++i) {
    if (i) out += "+";
    if (const auto* s = std::get_if<ShockWave>(&pattern_[i])) {
      out += "S" + std::to_string(s->family);
    } else if (const auto* f = std::get_if<FanWave>(&pattern_[i])) {
      out += "R" + std::to_string(f->family);
    } else {
      out += "VAC";
    }
  }
  return out;
}

namespace {

RiemannSolution one_side_vacuum_right(ThetaParam theta, double rho_l,
                                      double u_l) {
  RiemannData data =
      riemann_data(theta, RiemannSide::of(rho_l, u_l), RiemannSide::vacuum());
  const double lr = data.left.log_rho;
  FanWave fan;
  fan.family = 1;
  fan.invariant = fan_invariant(theta, 1, rho_l, u_l, lr);
  fan.head = lam(theta, 1, u_l, lr);
  fan.tail = theta.isothermal() ? kInf : fan.invariant;  // rho -> 0 edge
  MiddleState mid;
  mid.vac = true;
  return RiemannSolution(data, {fan}, {side_state(data.left), vacuum_state()},
                         mid);
}

}  // namespace

RiemannSolution one_side_vacuum_solution(ThetaParam theta, double rho_r,
                                         double u_r) {
  RiemannData data =
      riemann_data(theta, RiemannSide::vacuum(), RiemannSide::of(rho_r, u_r));
  const double lr = data.right.log_rho;
  FanWave fan;
  fan.family = 2;
  fan.invariant = fan_invariant(theta, 2, rho_r, u_r, lr);
  fan.tail = lam(theta, 2, u_r, lr);
  fan.head = theta.isothermal() ? -kInf : fan.invariant;  // rho -> 0 edge
  MiddleState mid;
  mid.vac = true;
  return RiemannSolution(data, {fan}, {vacuum_state(), side_state(data.right)},
                         mid);
}

RiemannSolution solve_riemann(const RiemannData& data) {
  const ThetaParam theta = data.theta;
  const bool lvac = data.left.vac || data.left.rho == 0.0;
  const bool rvac = data.right.vac || data.right.rho == 0.0;
  if (lvac && rvac) {
    MiddleState mid;
    mid.vac = true;
    return RiemannSolution(data, {}, {vacuum_state()}, mid);
  }
  if (lvac) return one_side_vacuum_solution(theta, data.right.rho, data.right.u);
  if (rvac) return one_side_vacuum_right(theta, data.left.rho, data.left.u);

  if (vacuum_criterion(data)) {
    // Two fans opening onto an expanding vacuum gap.
    const double th = theta.value();
    FanWave f1;
    f1.family = 1;
    f1.invariant = fan_invariant(theta, 1, data.left.rho, data.left.u,
                                 data.left.log_rho);
    f1.head = lam(theta, 1, data.left.u, data.left.log_rho);
    f1.tail = data.left.u + rho_pow_theta(theta, data.left) / th;
    FanWave f2;
    f2.family = 2;
    f2.invariant = fan_invariant(theta, 2, data.right.rho, data.right.u,
                                 data.right.log_rho);
    f2.head = data.right.u - rho_pow_theta(theta, data.right) / th;
    f2.tail = lam(theta, 2, data.right.u, data.right.log_rho);
    VacuumGap gap{f1.tail, f2.head};
    MiddleState mid;
    mid.vac = true;
    return RiemannSolution(
        data, {f1, gap, f2},
        {side_state(data.left), vacuum_state(), vacuum_state(),
         side_state(data.right)},
        mid);
  }

  const MiddleState mid = middle_state(data);
  const ConservedState sl = side_state(data.left);
  const ConservedState sm = {mid.rho, mid.rho * mid.u};
  const ConservedState sr = side_state(data.right);
  const double lmid = std::log(mid.rho);

  std::vector<Wave> pattern;
  std::vector<ConservedState> states;
  states.push_back(sl);

  if (mid.rho > data.left.rho * (1.0 + kDropTol)) {
    ShockWave s;
    s.family = 1;
    s.sigma = (sm.m - sl.m) / (sm.rho - sl.rho);
    pattern.push_back(s);
    states.push_back(sm);
  } else if (mid.rho < data.left.rho * (1.0 - kDropTol)) {
    FanWave f;
    f.family = 1;
    f.invariant = fan_invariant(theta, 1, data.left.rho, data.left.u,
                                data.left.log_rho);
    f.head = lam(theta, 1, data.left.u, data.left.log_rho);
    f.tail = lam(theta, 1, mid.u, lmid);
    pattern.push_back(f);
    states.push_back(sm);
  }

  if (mid.rho > data.right.rho * (1.0 + kDropTol)) {
    ShockWave s;
    s.family = 2;
    s.sigma = (sr.m - sm.m) / (sr.rho - sm.rho);
    pattern.push_back(s);
    states.push_back(sr);
  } else if (mid.rho < data.right.rho * (1.0 - kDropTol)) {
    FanWave f;
    f.family = 2;
    f.invariant = fan_invariant(theta, 2, data.right.rho, data.right.u,
                                data.right.log_rho);
    f.head = lam(theta, 2, mid.u, lmid);
    f.tail = lam(theta, 2, data.right.u, data.right.log_rho);
    pattern.push_back(f);
    states.push_back(sr);
  } else if (!pattern.empty()) {
    // 2-wave dropped: the data's right state is the middle state.
    states.back() = sr;
  }
  if (pattern.empty()) {
    states = {sl};  // constant solution
  }
  return RiemannSolution(data, std::move(pattern), std::move(states), mid);
}

std::optional<double> decavitation_threshold(double rho_l, double u_l,
                                             double rho_r, double u_r) {
  if (!(rho_l > 0.0) || !(rho_r > 0.0)) {
    throw std::domain_error("decavitation_threshold: densities must be > 0");
  }
  if (!(u_r > u_l)) {
    throw std::domain_error(
        "decavitation_threshold: data must open (u_r > u_l)");
  }
  const double du = u_r - u_l;
  const double ll = std::log(rho_l), lr = std::log(rho_r);
  auto F = [&](double th) {
    return du * th - std::exp(th * ll) - std::exp(th * lr);
  };
  const double lo_end = 1e-6, hi_end = ThetaParam::kSweepMax;
  const int n = 400;
  double a = lo_end, fa = F(a);
  double root_a = 0.0, root_b = 0.0;
  bool found = false;
  for (int i = 1; i <= n; ++i) {
    const double b = lo_end + (hi_end - lo_end) * i / n;
    const double fb = F(b);
    if (fa <= 0.0 && fb >= 0.0) {
      root_a = a;
      root_b = b;
      found = true;
      break;
    }
    a = b;
    fa = fb;
  }
  if (!found) return std::nullopt;
  double fa2 = F(root_a);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (root_a + root_b);
    const double fm = F(m);
    if (fm == 0.0) return m;
    if ((fa2 <= 0.0) == (fm <= 0.0)) {
      root_a = m;
      fa2 = fm;
    } else {
      root_b = m;
    }
    if (root_b - root_a <= 1e-15) break;
  }
  return 0.5 * (root_a + root_b);
}

RiemannData approximating_family(ThetaParam theta, double rho_r, double u_r,
                                 double scale) {
  if (theta.isothermal()) {
    throw std::domain_error("approximating_family: needs theta > 0");
  }
  if (!(rho_r > 0.0) || !(scale > 0.0)) {
    throw std::domain_error("approximating_family: rho_r and scale must be > 0");
  }
  const double th = theta.value();
  const double lr = std::log(scale) + std::log(th) / th;
  // rho_l^theta = scale^theta * theta, computable even when rho_l underflows
  const double rp_l = std::exp(th * lr);
  const double rp_r = std::pow(rho_r, th);
  const double u_l = u_r - (rp_r - rp_l) / th;
  return riemann_data(theta, RiemannSide::from_log(lr, u_l),
                      RiemannSide::of(rho_r, u_r));
}

}  // namespace eulimit
