#pragma once

// The two-state parameter sets used by the published experiments. No real-world
// drift is given there, so P runs the risk-neutral dynamics (mu_i = r - lambda_i kappa_i).

#include "regimevar/model.hpp"

namespace fixture {

inline constexpr double kTableRate = 0.005;

struct Pair {
  regimevar::RegimeModel p;
  regimevar::RegimeModel q;
};

inline Pair two_state(double s1, double s2, double l1, double l2, double a1, double a2,
                      double b1, double b2, double q1, double q2, double r = kTableRate) {
  using namespace regimevar;
  RegimeParams x{0.0, s1, l1, {a1, b1}};
  RegimeParams y{0.0, s2, l2, {a2, b2}};
  x.mu = r - l1 * kappa(x.jump);
  y.mu = r - l2 * kappa(y.jump);
  Pair out;
  out.p = two_state_model(x, y, q1, q2, 0, Historical{});
  out.q = apply_measure_change(out.p, MeasureChangeSpec::identity(out.p.regimes), r).model;
  return out;
}

inline Pair table1() { return two_state(0.3, 0.05, 2.0, 0.8, 0.0, 0.0, 0.08, 0.15, 1.0, 0.2); }
inline Pair table2() { return two_state(0.3, 0.05, 2.0, 0.8, 0.05, -0.3, 0.08, 0.15, 1.0, 0.2); }
inline Pair table3() {
  return two_state(0.27, 0.13, 6.8, 0.8, -0.13, -0.34, 0.08, 0.15, 6.5, 0.002);
}

inline regimevar::MarketSetup table_setup(double horizon, double budget) {
  regimevar::MarketSetup s;
  s.spot = 100.0;
  s.rate = kTableRate;
  s.horizon = horizon;
  s.alpha = 0.01;
  s.budget = budget;
  return s;
}

}  // namespace fixture
