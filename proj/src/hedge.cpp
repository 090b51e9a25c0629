#include "regimevar/hedge.hpp"

#include "regimevar/errors.hpp"
#include "regimevar/roots.hpp"
#include "regimevar/transform.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace regimevar {

namespace {

constexpr double kStrikeCeiling = 1e3;  // in units of S0

void check_pair(const MarketSetup& setup, const RegimeModel& p_model,
                const RegimeModel& q_model) {
  require_valid(setup);
  require_valid(p_model);
  require_valid(q_model);
  if (!q_model.risk_neutral()) throw InputError("pricing model must be risk-neutral");
  if (std::abs(q_model.rate() - setup.rate) > 1e-12)
    throw InputError("pricing model rate differs from the market setup rate");
}

RootOptions strike_options(double spot, double hi) {
  RootOptions opt;
  opt.bisect_width = spot * 1e-6;
  opt.f_tol = spot * 1e-12;
  opt.x_tol = 4.0 * std::numeric_limits<double>::epsilon() * hi;
  return opt;
}

// Smallest K >= from with Put(K) = budget.
double strike_for_premium(double budget, double from, const MarketSetup& s,
                          const RegimeModel& q_model,
                          const InversionSettings& settings) {
  auto gap = [&](double k) {
    return put_price(k, s.horizon, q_model, s.spot, settings.price) - budget;
  };
  double lo = from;
  double f_lo = gap(lo);
  if (f_lo >= 0.0) return lo;
  const double ceiling = kStrikeCeiling * s.spot;
  double hi = std::min(std::max(2.0 * lo, s.spot), ceiling);
  double f_hi = gap(hi);
  while (f_hi < 0.0) {
    if (hi >= ceiling)
      throw BudgetExceedsAnyPut("budget exceeds the price of any put with K <= 1e3*S0");
    lo = hi;
    f_lo = f_hi;
    hi = std::min(2.0 * hi, ceiling);
    f_hi = gap(hi);
  }
  RootOptions opt = strike_options(s.spot, hi);
  opt.f_tol = 1e-13 * std::max(budget, 1.0);
  return find_root(gap, lo, hi, f_lo, f_hi, opt);
}

}  // namespace

std::string_view to_string(HedgeBoundary b) {
  switch (b) {
    case HedgeBoundary::Interior:
      return "interior";
    case HedgeBoundary::FractionCapped:
      return "fraction_capped";
    case HedgeBoundary::Infeasible:
      return "infeasible";
  }
  return "unknown";
}

double optimal_strike(double lower_quantile, double horizon,
                      const RegimeModel& q_model, double spot,
                      const InversionSettings& settings) {
  if (!q_model.risk_neutral()) throw InputError("optimal_strike needs a risk-neutral model");
  if (!(lower_quantile > 0.0)) throw InputError("quantile must be > 0");
  const double r = q_model.rate();
  const double forward = spot * std::exp(r * horizon);
  if (lower_quantile >= forward) {
    throw ExistenceViolated("q_{1-alpha}(S_T) = " + std::to_string(lower_quantile) +
                            " >= E^Q[S_T] = " + std::to_string(forward));
  }
  const double q = lower_quantile;
  auto foc = [&](double k) {
    const double put = put_price(k, horizon, q_model, spot, settings.price);
    const double slope =
        put_strike_derivative(k, horizon, q_model, spot, settings.probability);
    return put - (k - q) * slope;
  };

  const double lo = q * (1.0 + 1e-9);
  const double f_lo = foc(lo);
  double hi = std::max(2.0 * q, forward);
  double f_hi = foc(hi);
  double from = lo;
  double f_from = f_lo;
  while (f_hi > 0.0) {
    if (hi > kStrikeCeiling * spot)
      throw ExistenceViolated("first-order condition has no root below 1e3*S0");
    from = hi;
    f_from = f_hi;
    hi *= 2.0;
    f_hi = foc(hi);
  }
  return find_root(foc, from, hi, f_from, f_hi, strike_options(spot, hi));
}

HedgeSolution solve_hedge(const MarketSetup& setup, const RegimeModel& p_model,
                          const RegimeModel& q_model,
                          const InversionSettings& settings) {
  check_pair(setup, p_model, q_model);
  const double disc = std::exp(-setup.rate * setup.horizon);

  HedgeSolution sol;
  sol.lower_quantile = lower_quantile(setup, p_model, settings.probability);
  sol.unhedged_var = setup.spot - disc * sol.lower_quantile;

  if (sol.lower_quantile >= setup.spot / disc) {
    sol.boundary = HedgeBoundary::Infeasible;
    sol.hedged_var = sol.unhedged_var;
    return sol;
  }

  sol.strike = optimal_strike(sol.lower_quantile, setup.horizon, q_model,
                              setup.spot, settings);
  sol.premium = put_price(sol.strike, setup.horizon, q_model, setup.spot,
                          settings.price);
  sol.fraction = setup.budget / sol.premium;

  if (sol.fraction > 1.0) {
    sol.boundary = HedgeBoundary::FractionCapped;
    sol.strike = strike_for_premium(setup.budget, sol.strike, setup, q_model, settings);
    sol.premium = setup.budget;
    sol.fraction = 1.0;
  }

  LossSpec loss{setup, sol.fraction, sol.strike, sol.premium};
  sol.hedged_var = hedged_var(loss, sol.lower_quantile);
  sol.reduction = 1.0 - sol.hedged_var / sol.unhedged_var;
  return sol;
}

Frontier efficient_frontier(const MarketSetup& setup, const RegimeModel& p_model,
                            const RegimeModel& q_model,
                            const std::vector<double>& budgets,
                            const InversionSettings& settings) {
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (!(budgets[i] >= 0.0)) throw InputError("budgets must be >= 0");
    if (i > 0 && budgets[i] < budgets[i - 1])
      throw InputError("budgets must be sorted ascending");
  }

  MarketSetup base = setup;
  base.budget = 0.0;
  const HedgeSolution ref = solve_hedge(base, p_model, q_model, settings);
  if (ref.boundary == HedgeBoundary::Infeasible)
    throw ExistenceViolated("no hedge reduces VaR: q_{1-alpha}(S_T) >= E^Q[S_T]");

  Frontier out;
  const double growth = std::exp(setup.rate * setup.horizon);
  out.intercept = ref.unhedged_var;
  out.strike = ref.strike;
  out.capacity = ref.premium;
  out.slope = (ref.premium * growth - (ref.strike - ref.lower_quantile)) /
              (ref.premium * growth);

  out.points.resize(budgets.size());
  std::vector<std::exception_ptr> failures(budgets.size());
  const auto n = static_cast<long>(budgets.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      MarketSetup s = setup;
      s.budget = budgets[idx];
      const HedgeSolution sol = solve_hedge(s, p_model, q_model, settings);
      out.points[idx] = FrontierPoint{budgets[idx], sol.hedged_var, sol.boundary};
    } catch (...) {
      failures[idx] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

MinCostSolution min_cost_for_target(const MarketSetup& setup,
                                    const RegimeModel& p_model,
                                    const RegimeModel& q_model, double target,
                                    const InversionSettings& settings) {
  MarketSetup base = setup;
  base.budget = 0.0;
  const HedgeSolution ref = solve_hedge(base, p_model, q_model, settings);
  if (ref.boundary == HedgeBoundary::Infeasible)
    throw ExistenceViolated("no hedge reduces VaR: q_{1-alpha}(S_T) >= E^Q[S_T]");

  MinCostSolution out;
  out.strike = ref.strike;
  if (target >= ref.unhedged_var) return out;
  if (!(target >= 0.0))
    throw TargetUnattainable("target VaR below zero is not reachable with puts");

  const double growth = std::exp(setup.rate * setup.horizon);
  const double slope = (ref.premium * growth - (ref.strike - ref.lower_quantile)) /
                       (ref.premium * growth);
  const double budget = (target - ref.unhedged_var) / slope;
  if (budget <= ref.premium) {
    out.budget = budget;
    out.fraction = budget / ref.premium;
    return out;
  }

  // Full coverage: VaR(K) = VaR_u + Put(K) - e^{-rT}(K - q), decreasing in K > K*.
  const double disc = 1.0 / growth;
  const double q = ref.lower_quantile;
  auto excess = [&](double k) {
    return ref.unhedged_var +
           put_price(k, setup.horizon, q_model, setup.spot, settings.price) -
           disc * (k - q) - target;
  };
  double lo = ref.strike;
  double f_lo = excess(lo);
  double hi = std::max(2.0 * lo, setup.spot);
  double f_hi = excess(hi);
  while (f_hi > 0.0) {
    if (hi > kStrikeCeiling * setup.spot)
      throw TargetUnattainable("target VaR below the full-hedge floor");
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    f_hi = excess(hi);
  }
  RootOptions opt = strike_options(setup.spot, hi);
  opt.f_tol = 1e-13 * setup.spot;
  out.strike = find_root(excess, lo, hi, f_lo, f_hi, opt);
  out.budget = put_price(out.strike, setup.horizon, q_model, setup.spot, settings.price);
  out.fraction = 1.0;
  out.boundary = HedgeBoundary::FractionCapped;
  return out;
}

}  // namespace regimevar
