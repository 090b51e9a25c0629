#include "regimevar/risk.hpp"

#include "regimevar/charfun.hpp"
#include "regimevar/errors.hpp"
#include "regimevar/roots.hpp"
#include "regimevar/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace regimevar {

double quantile(double p, double horizon, const RegimeModel& model, double spot,
                const QuadratureSpec& quad) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("quantile level must be in (0,1)");
  if (!(spot > 0.0)) throw InputError("spot must be > 0");
  if (!(horizon > 0.0)) throw InputError("horizon must be > 0");
  require_valid(model);

  auto residual = [&](double v) {
    return tail_prob(v, horizon, model, spot, quad) - p;
  };

  const LogReturnMoments mom = log_return_moments(horizon, model);
  const double floor = spot * 1e-8;
  const double ceiling = spot * 1e8;
  double lo = std::max(floor, spot * std::exp(mom.mean - 8.0 * mom.stdev));
  double hi = std::min(ceiling, spot * std::exp(mom.mean + 8.0 * mom.stdev));
  if (!(lo < hi)) {
    lo = floor;
    hi = ceiling;
  }

  double f_lo = residual(lo);
  while (f_lo > 0.0) {
    if (lo <= floor) throw NumericalError("quantile: lower bracket not found");
    hi = lo;
    lo = std::max(floor, lo * 0.1);
    f_lo = residual(lo);
  }
  double f_hi = residual(hi);
  while (f_hi < 0.0) {
    if (hi >= ceiling) throw NumericalError("quantile: upper bracket not found");
    lo = hi;
    f_lo = f_hi;
    hi = std::min(ceiling, hi * 10.0);
    f_hi = residual(hi);
  }

  RootOptions opt;
  opt.bisect_width = spot * 1e-6;
  opt.f_tol = 1e-12;
  opt.x_tol = 4.0 * std::numeric_limits<double>::epsilon() * hi;
  return find_root(residual, lo, hi, f_lo, f_hi, opt);
}

double var_unhedged(const MarketSetup& setup, const RegimeModel& p_model,
                    const QuadratureSpec& quad) {
  require_valid(setup);
  const double q = lower_quantile(setup, p_model, quad);
  return setup.spot - std::exp(-setup.rate * setup.horizon) * q;
}

double LossSpec::kink() const {
  return setup.spot - std::exp(-setup.rate * setup.horizon) * strike;
}

double g_transform(double u, const LossSpec& loss) {
  const double kbar = loss.kink();
  return u - loss.fraction * std::max(u - kbar, 0.0) +
         loss.fraction * loss.premium;
}

double g_inverse(double v, const LossSpec& loss) {
  const double kbar = loss.kink();
  const double w = v - loss.fraction * loss.premium;
  if (w <= kbar) return w;
  if (loss.fraction < 1.0) return kbar + (w - kbar) / (1.0 - loss.fraction);
  return std::numeric_limits<double>::infinity();
}

double hedged_var(const LossSpec& loss, double lower_quantile) {
  const LossSpec& l = loss;
  const double disc = std::exp(-l.setup.rate * l.setup.horizon);
  const double var_u = l.setup.spot - disc * lower_quantile;
  return var_u + l.fraction * l.premium -
         disc * l.fraction * std::max(l.strike - lower_quantile, 0.0);
}

double hedged_loss_tail_prob(double v, const LossSpec& loss,
                             const RegimeModel& p_model,
                             const QuadratureSpec& quad) {
  if (!(loss.fraction >= 0.0 && loss.fraction <= 1.0))
    throw InputError("hedge fraction must be in [0,1]");
  const double u = g_inverse(v, loss);
  if (std::isinf(u)) return 0.0;
  const MarketSetup& s = loss.setup;
  const double level = std::exp(s.rate * s.horizon) * (s.spot - u);
  if (level <= 0.0) return 0.0;
  return tail_prob(level, s.horizon, p_model, s.spot, quad);
}

}  // namespace regimevar
