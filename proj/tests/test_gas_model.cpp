// Pressure law, invariants, budget predicates, flux, mechanical energy pair.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "eulimit/gas_model.hpp"

using namespace eulimit;

namespace {
const ThetaParam kHalf{0.5};
const ThetaParam kIso{0.0};
const ThetaParam kOne{1.0};
}  // namespace

TEST_CASE("theta parameter validates its range") {
  CHECK_NOTHROW(ThetaParam(0.0));
  CHECK_NOTHROW(ThetaParam(1.0));
  CHECK_THROWS_AS(ThetaParam(-0.1), std::domain_error);
  CHECK_THROWS_AS(ThetaParam(1.5), std::domain_error);
  CHECK_THROWS_AS(ThetaParam(std::nan("")), std::domain_error);
  CHECK(ThetaParam(0.5).gamma() == doctest::Approx(2.0));
  CHECK(kIso.isothermal());
  CHECK_FALSE(kHalf.isothermal());
}

TEST_CASE("state constructors enforce physical ranges") {
  CHECK_THROWS_AS(make_state(-1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(make_state(0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(make_state(1.0, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(state_from_velocity(0.0, 1.0), std::domain_error);
  CHECK(is_vacuum(vacuum_state()));
  CHECK_THROWS_AS(velocity(vacuum_state()), VacuumStateError);
  CHECK(velocity(state_from_velocity(2.0, -0.25)) == doctest::Approx(-0.25));
}

TEST_CASE("pressure law on both branches") {
  // gamma = 2: p = rho^2/2
  CHECK(pressure(kHalf, 2.0) == doctest::Approx(2.0));
  // gamma = 3: p = rho^3/3
  CHECK(pressure(kOne, 2.0) == doctest::Approx(8.0 / 3.0));
  // isothermal: p = rho
  CHECK(pressure(kIso, 2.0) == doctest::Approx(2.0));
  CHECK(pressure(kHalf, 0.0) == 0.0);
  CHECK(pressure(kIso, 0.0) == 0.0);

  CHECK(pressure_derivative(kHalf, 4.0) == doctest::Approx(4.0));
  CHECK(pressure_derivative(kIso, 4.0) == doctest::Approx(1.0));

  // p' = c^2 at a grid of states on both branches
  for (double th : {0.0, 0.1, 0.5, 1.0}) {
    ThetaParam t{th};
    for (double rho : {0.05, 0.7, 1.0, 3.0}) {
      CHECK(pressure_derivative(t, rho) ==
            doctest::Approx(sound_speed(t, rho) * sound_speed(t, rho))
                .epsilon(1e-13));
    }
  }
}

TEST_CASE("sound speed") {
  CHECK(sound_speed(kHalf, 4.0) == doctest::Approx(2.0));
  CHECK(sound_speed(kIso, 4.0) == doctest::Approx(1.0));
  CHECK(sound_speed(kIso, 1e-9) == doctest::Approx(1.0));
  CHECK(sound_speed(kHalf, 0.0) == 0.0);
}

TEST_CASE("scaled density matches (rho^theta-1)/theta and its limit") {
  CHECK(scaled_density(kHalf, 4.0) == doctest::Approx(2.0));
  CHECK(scaled_density(kIso, 4.0) == doctest::Approx(std::log(4.0)));
  // theta -> 0 continuity: |(rho^theta-1)/theta - ln rho| = O(theta)
  for (double rho : {0.01, 0.5, 1.0, 2.0, 7.0}) {
    const double lr = std::log(rho);
    for (double th : {1e-3, 1e-6, 1e-9, 1e-12}) {
      const double sd = scaled_density(ThetaParam(th), rho);
      CHECK(std::abs(sd - lr) <=
            0.5 * th * lr * lr * std::exp(th * std::abs(lr)) + 1e-14);
    }
  }
  // vacuum endpoints
  CHECK(scaled_density(kHalf, 0.0) == doctest::Approx(-2.0));
  CHECK(scaled_density(kIso, 0.0) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("inverse scaled density round-trips and clamps") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> uv(-1.8, 2.0);
  for (double th : {0.0, 1e-4, 0.05, 0.5, 1.0}) {
    ThetaParam t{th};
    for (int i = 0; i < 200; ++i) {
      const double v = uv(rng);
      const double rho = inverse_scaled_density(t, v);
      if (th > 0.0 && v <= -1.0 / th) {
        CHECK(rho == 0.0);  // below the branch minimum
      } else {
        CHECK(scaled_density(t, rho) == doctest::Approx(v).epsilon(1e-12));
      }
    }
  }
  // below the branch minimum -1/theta the density clamps to vacuum
  CHECK(inverse_scaled_density(kHalf, -2.0) == 0.0);
  CHECK(inverse_scaled_density(kHalf, -5.0) == 0.0);
}

TEST_CASE("power difference quotient agrees with naive form away from 0") {
  for (double a : {0.2, 1.0, 2.0}) {
    for (double rho : {0.3, 1.0, 4.0}) {
      CHECK(power_diff_quotient(a, rho) ==
            doctest::Approx((std::pow(rho, a) - 1.0) / a).epsilon(1e-13));
    }
  }
  CHECK(power_diff_quotient(0.0, 4.0) == doctest::Approx(std::log(4.0)));
}

TEST_CASE("riemann invariants") {
  const auto [w1, w2] = riemann_invariants(kHalf, state_from_velocity(1.0, 0.0));
  CHECK(w1 == doctest::Approx(2.0));
  CHECK(w2 == doctest::Approx(-2.0));
  const auto [v1, v2] = riemann_invariants(kIso, state_from_velocity(1.0, 0.5));
  CHECK(v1 == doctest::Approx(std::exp(0.5)));
  CHECK(v2 == doctest::Approx(std::exp(-0.5)));
  CHECK_THROWS_AS(riemann_invariants(kHalf, vacuum_state()), VacuumStateError);
}

TEST_CASE("budget predicates and implied bounds") {
  const BoundBudget w0{2.0};
  CHECK(invariant_budget(kHalf, state_from_velocity(1.0, 1.5), w0));
  CHECK_FALSE(invariant_budget(kHalf, state_from_velocity(1.0, 2.5), w0));
  CHECK(invariant_budget(kHalf, vacuum_state(), w0));
  CHECK(budget_value(kHalf, vacuum_state()) ==
        -std::numeric_limits<double>::infinity());
  CHECK(budget_value(kHalf, state_from_velocity(4.0, -1.0)) ==
        doctest::Approx(3.0));

  // log-density form agrees with the plain form where both apply
  CHECK(invariant_budget_log(kHalf, std::log(1.0), 1.5, w0));
  CHECK_FALSE(invariant_budget_log(kHalf, std::log(1.0), 2.5, w0));
  // underflowing density: rho = e^{-800} is inside any budget for theta > 0
  CHECK(invariant_budget_log(kHalf, -800.0, 0.0, w0));

  // every state inside the budget obeys rho <= e^{w0}, |m| <= rho(|ln rho|+w0)
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uu(-2.0, 2.0);
  std::uniform_real_distribution<double> ur(1e-4, std::exp(2.0));
  for (double th : {0.0, 0.3, 1.0}) {
    ThetaParam t{th};
    for (int i = 0; i < 500; ++i) {
      const ConservedState s = state_from_velocity(ur(rng), uu(rng));
      if (!invariant_budget(t, s, w0)) continue;
      CHECK(within_density_bound(s, w0));
      CHECK(within_momentum_bound(s, w0));
    }
  }
}

TEST_CASE("flux and eigenvalues") {
  const ConservedState s = make_state(2.0, 1.0);
  const auto [f1, f2] = flux(kHalf, s);
  CHECK(f1 == doctest::Approx(1.0));
  CHECK(f2 == doctest::Approx(2.5));  // m^2/rho + rho^2/2 = 0.5 + 2
  const auto [g1, g2] = flux(kIso, s);
  CHECK(g1 == doctest::Approx(1.0));
  CHECK(g2 == doctest::Approx(2.5));  // m^2/rho + rho = 0.5 + 2
  CHECK(flux(kHalf, vacuum_state()).first == 0.0);
  CHECK(flux(kHalf, vacuum_state()).second == 0.0);

  const auto [l1, l2] = eigenvalues(kHalf, state_from_velocity(4.0, 0.5));
  CHECK(l1 == doctest::Approx(-1.5));
  CHECK(l2 == doctest::Approx(2.5));
  const auto [m1, m2] = eigenvalues(kIso, state_from_velocity(4.0, 0.5));
  CHECK(m1 == doctest::Approx(-0.5));
  CHECK(m2 == doctest::Approx(1.5));
  CHECK(eigenvalues(kHalf, vacuum_state()).first == 0.0);
  CHECK_THROWS_AS(eigenvalues(kIso, vacuum_state()), VacuumStateError);
}

TEST_CASE("mechanical energy pair: closed forms and the theta -> 0 limit") {
  const ConservedState s = make_state(1.0, 1.0);
  // theta = 0: eta* = m^2/2rho + rho ln rho, q* = m^3/2rho^2 + m(ln rho + 1)
  const EntropyPairValue iso = mechanical_energy_pair(kIso, s);
  CHECK(iso.eta == doctest::Approx(0.5));
  CHECK(iso.q == doctest::Approx(1.5));
  // theta = 0.5: eta* = m^2/2rho + rho(rho-1)/2, q* = m^3/2rho^2 + m(rho-1+1/2)
  const EntropyPairValue half = mechanical_energy_pair(kHalf, s);
  CHECK(half.eta == doctest::Approx(0.5));
  CHECK(half.q == doctest::Approx(1.0));
  // vacuum maps to zero
  CHECK(mechanical_energy_pair(kHalf, vacuum_state()).eta == 0.0);
  CHECK(mechanical_energy_pair(kIso, vacuum_state()).q == 0.0);

  // continuity in theta at fixed state
  const ConservedState s2 = state_from_velocity(1.7, -0.4);
  const EntropyPairValue ref = mechanical_energy_pair(kIso, s2);
  double prev_eta = 1e300, prev_q = 1e300;
  for (double th : {1e-2, 1e-4, 1e-6}) {
    const EntropyPairValue v = mechanical_energy_pair(ThetaParam(th), s2);
    const double de = std::abs(v.eta - ref.eta);
    const double dq = std::abs(v.q - ref.q);
    CHECK(de < prev_eta);
    CHECK(dq < prev_q);
    prev_eta = de;
    prev_q = dq;
  }
  CHECK(prev_eta < 1e-5);
  CHECK(prev_q < 1e-5);
}
