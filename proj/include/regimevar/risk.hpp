#pragma once

#include "regimevar/model.hpp"
#include "regimevar/quadrature.hpp"

namespace regimevar {

/// Contours used by the workflows that need both prices and probabilities.
struct InversionSettings {
  QuadratureSpec price = QuadratureSpec::for_prices();
  QuadratureSpec probability = QuadratureSpec::for_probabilities();
};

/// q with P(S_T < q) = p, to |residual| < 1e-10. The bracket starts at
/// S0 exp(m +- 8 s) from the log-return moments and grows by decades up to
/// [S0 1e-8, S0 1e8].
double quantile(double p, double horizon, const RegimeModel& model,
                double spot,
                const QuadratureSpec& quad = QuadratureSpec::for_probabilities());

/// The level S_T falls below with probability alpha, written q_{1-alpha}(S_T)
/// in the VaR formulas: the loss S0 - e^{-rT} S_T exceeds VaR with
/// probability alpha exactly when S_T < q.
inline double lower_quantile(const MarketSetup& setup, const RegimeModel& p_model,
                             const QuadratureSpec& quad = QuadratureSpec::for_probabilities()) {
  return quantile(setup.alpha, setup.horizon, p_model, setup.spot, quad);
}

/// VaR_alpha(L^u) = S0 - e^{-rT} q_{1-alpha}(S_T).
double var_unhedged(const MarketSetup& setup, const RegimeModel& p_model,
                    const QuadratureSpec& quad = QuadratureSpec::for_probabilities());

/// Loss of the position hedged with a fraction h of a put struck at K:
///   L^{h,K} = S0 + h put0 - e^{-rT} (S_T + h (K - S_T)^+) = g(L^u).
struct LossSpec {
  MarketSetup setup;
  double fraction = 0.0;  // h in [0, 1]
  double strike = 0.0;
  double premium = 0.0;   // put0, the time-0 put price paid

  /// Kbar = S0 - e^{-rT} K, the unhedged loss at which the put goes live.
  double kink() const;
};

/// g(u) = u - h (u - Kbar)^+ + h put0.
double g_transform(double u, const LossSpec& loss);

/// Piecewise-linear inverse of g. For h = 1 the flat segment maps to its
/// infimum and values above Kbar + put0 return +infinity.
double g_inverse(double v, const LossSpec& loss);

/// VaR_alpha(L^u) + h put0 - e^{-rT} h (K - q)^+, i.e. g(VaR_alpha(L^u)).
double hedged_var(const LossSpec& loss, double lower_quantile);

/// P(L^{h,K} >= v) = P(S_T <= e^{rT} (S0 - g^{-1}(v))) under the given model.
double hedged_loss_tail_prob(
    double v, const LossSpec& loss, const RegimeModel& p_model,
    const QuadratureSpec& quad = QuadratureSpec::for_probabilities());

}  // namespace regimevar
