#include "regimevar/transform.hpp"

#include "regimevar/charfun.hpp"
#include "regimevar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace regimevar {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kProbabilitySlack = 1e-6;

void check_common(double level, double horizon, const RegimeModel& model,
                  double spot, const QuadratureSpec& quad) {
  if (!(level > 0.0) || !std::isfinite(level))
    throw InputError("level/strike must be > 0");
  if (!(spot > 0.0)) throw InputError("spot must be > 0");
  if (!(horizon > 0.0)) throw InputError("horizon must be > 0");
  if (!(quad.rel_tol > 0.0) || !(quad.abs_tol > 0.0) ||
      !(quad.truncation_tol > 0.0))
    throw InputError("quadrature tolerances must be > 0");
  require_valid(model);
}

double diffusion_decay(double horizon, const RegimeModel& model) {
  const double s = model.min_sigma();
  return 0.5 * s * s * horizon;
}

// Inversion along Im z = nu - 1 for the payoff (K - S)^+. For nu > 1 this is
// the put, for nu < 0 the call.
double invert_put_payoff(double log_moneyness, double horizon,
                         const RegimeModel& q_model, double spot, double nu,
                         const QuadratureSpec& quad) {
  const double r = q_model.rate();
  const double prefactor = std::exp(-r * horizon) * spot *
                           std::exp(nu * log_moneyness) / std::numbers::pi;
  const double shift = nu - 1.0;
  auto integrand = [&](double u) {
    const cplx z{u, shift};
    const cplx den{nu * nu - u * u - nu, u * (1.0 - 2.0 * nu)};
    return prefactor * std::exp(-kI * u * log_moneyness) *
           characteristic_function(z, horizon, q_model) / den;
  };
  const double at_axis =
      std::abs(characteristic_function(cplx{0.0, shift}, horizon, q_model));
  Envelope env;
  env.scale = prefactor * at_axis / (std::abs(nu) * std::abs(shift));
  env.gaussian_rate = diffusion_decay(horizon, q_model);
  return integrate_halfline(integrand, env, quad).value;
}

}  // namespace

double put_price(double strike, double horizon, const RegimeModel& q_model,
                 double spot, const QuadratureSpec& quad) {
  check_common(strike, horizon, q_model, spot, quad);
  if (!q_model.risk_neutral()) throw InputError("put_price needs a risk-neutral model");
  if (!(quad.nu > 1.0)) throw InputError("put_price requires nu > 1");

  const double r = q_model.rate();
  const double discount = std::exp(-r * horizon);
  const double x = std::log(strike / spot);
  double put;
  if (x > r * horizon) {
    const double call = invert_put_payoff(x, horizon, q_model, spot, 1.0 - quad.nu, quad);
    put = call - spot + discount * strike;
  } else {
    put = invert_put_payoff(x, horizon, q_model, spot, quad.nu, quad);
  }
  const double cap = discount * strike;
  const double slack = kProbabilitySlack * cap;
  if (put < -slack || put > cap + slack)
    throw ContourError("put price " + std::to_string(put) +
                       " outside no-arbitrage bounds");
  return std::clamp(put, 0.0, cap);
}

double tail_prob(double level, double horizon, const RegimeModel& model,
                 double spot, const QuadratureSpec& quad) {
  check_common(level, horizon, model, spot, quad);
  if (!(quad.nu > 0.0)) throw InputError("tail_prob requires nu > 0");

  const double k = std::log(level / spot);
  const bool mirrored = k > log_return_moments(horizon, model).mean;
  const double nu = mirrored ? -quad.nu : quad.nu;
  const double prefactor = std::exp(nu * k) / std::numbers::pi;
  auto integrand = [&](double u) {
    return prefactor * std::exp(-kI * u * k) *
           characteristic_function(cplx{u, nu}, horizon, model) /
           cplx{nu, -u};
  };
  Envelope env;
  env.scale = prefactor *
              std::abs(characteristic_function(cplx{0.0, nu}, horizon, model)) /
              std::abs(nu);
  env.gaussian_rate = diffusion_decay(horizon, model);
  double p = integrate_halfline(integrand, env, quad).value;
  if (mirrored) p += 1.0;
  if (p < -kProbabilitySlack || p > 1.0 + kProbabilitySlack)
    throw ContourError("inverted probability " + std::to_string(p) +
                       " outside [0,1]; check nu");
  return std::clamp(p, 0.0, 1.0);
}

double put_strike_derivative(double strike, double horizon,
                             const RegimeModel& q_model, double spot,
                             const QuadratureSpec& quad) {
  const double r = q_model.rate();
  return std::exp(-r * horizon) *
         tail_prob(strike, horizon, q_model, spot, quad);
}

double call_price(double strike, double horizon, const RegimeModel& q_model,
                  double spot, const QuadratureSpec& quad) {
  const double put = put_price(strike, horizon, q_model, spot, quad);
  return put + spot - std::exp(-q_model.rate() * horizon) * strike;
}

}  // namespace regimevar
