#pragma once

#include "regimevar/model.hpp"
#include "regimevar/risk.hpp"

#include <string_view>
#include <vector>

namespace regimevar {

enum class HedgeBoundary {
  Interior,        // h* = C / Put(K*) <= 1
  FractionCapped,  // h = 1 and Put(K) = C with K > K*
  Infeasible,      // q_{1-alpha}(S_T) >= E^Q[S_T]; no hedge improves VaR
};

std::string_view to_string(HedgeBoundary b);

/// Result of the budget-constrained VaR minimization.
struct HedgeSolution {
  double strike = 0.0;
  double fraction = 0.0;
  double hedged_var = 0.0;
  double unhedged_var = 0.0;
  double reduction = 0.0;  // R = 1 - hedged / unhedged
  HedgeBoundary boundary = HedgeBoundary::Interior;
  double lower_quantile = 0.0;  // q_{1-alpha}(S_T) under P
  double premium = 0.0;         // Put(strike) under Q
};

/// Root of Put(K) = (K - q) dPut/dK with K > q, i.e. E^Q[S_T | S_T <= K] = q.
/// Throws ExistenceViolated when q >= S0 e^{rT}.
double optimal_strike(double lower_quantile, double horizon,
                      const RegimeModel& q_model, double spot,
                      const InversionSettings& settings = {});

/// min_{K,h} VaR_alpha(L^{h,K}) subject to h Put(K) = C, h in (0,1].
HedgeSolution solve_hedge(const MarketSetup& setup, const RegimeModel& p_model,
                          const RegimeModel& q_model,
                          const InversionSettings& settings = {});

struct FrontierPoint {
  double budget = 0.0;
  double var = 0.0;
  HedgeBoundary boundary = HedgeBoundary::Interior;
};

/// VaR*(C) on a budget sweep together with its closed-form line
/// VaR*(C) = VaR_alpha(L^u) + slope * C, valid while C <= capacity.
struct Frontier {
  std::vector<FrontierPoint> points;
  double intercept = 0.0;  // unhedged VaR
  double slope = 0.0;      // (Put(K*) e^{rT} - (K* - q)) / (Put(K*) e^{rT})
  double capacity = 0.0;   // Put(K*), the budget where h* reaches 1
  double strike = 0.0;     // K*, independent of C

  double line(double budget) const { return intercept + slope * budget; }
};

/// Budgets must be >= 0 and sorted ascending. Each point is an independent
/// solve_hedge (the sweep runs in parallel).
Frontier efficient_frontier(const MarketSetup& setup, const RegimeModel& p_model,
                            const RegimeModel& q_model,
                            const std::vector<double>& budgets,
                            const InversionSettings& settings = {});

struct MinCostSolution {
  double budget = 0.0;
  double strike = 0.0;
  double fraction = 0.0;
  HedgeBoundary boundary = HedgeBoundary::Interior;
};

/// Cheapest hedge reaching VaR <= target. Targets at or above the unhedged
/// VaR cost nothing; below the affine range the full-coverage branch is used.
/// Throws TargetUnattainable if no put with K <= 1e3 S0 reaches the target.
MinCostSolution min_cost_for_target(const MarketSetup& setup,
                                    const RegimeModel& p_model,
                                    const RegimeModel& q_model, double target,
                                    const InversionSettings& settings = {});

}  // namespace regimevar
