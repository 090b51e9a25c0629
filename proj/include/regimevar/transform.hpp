#pragma once

#include "regimevar/model.hpp"
#include "regimevar/quadrature.hpp"

namespace regimevar {

/// European put by inversion along Im z = nu - 1 (requires nu > 1):
///   e^{-rT} e^{nu k} S0^{1-nu} / pi
///     * Re int_0^inf e^{-iu(k - log S0)} phi(u + i(nu-1))
///                    / (nu^2 - u^2 - nu + iu(1 - 2nu)) du,   k = log K.
/// Strikes above the forward are priced through the call on the mirrored
/// contour 1 - nu and put-call parity.
double put_price(double strike, double horizon, const RegimeModel& q_model,
                 double spot,
                 const QuadratureSpec& quad = QuadratureSpec::for_prices());

/// P(S_T < level) under the model's own measure (requires nu > 0):
///   (v/S0)^nu / pi * Re int_0^inf e^{-iu log(v/S0)} phi(u + i nu)/(nu - iu) du.
/// Levels above the distribution centre use the contour -nu, which returns
/// P - 1. Results outside [-1e-6, 1 + 1e-6] raise ContourError; the rest is
/// clamped to [0, 1].
double tail_prob(double level, double horizon, const RegimeModel& model,
                 double spot,
                 const QuadratureSpec& quad = QuadratureSpec::for_probabilities());

/// dPut/dK = e^{-rT} Q(S_T <= K).
double put_strike_derivative(
    double strike, double horizon, const RegimeModel& q_model, double spot,
    const QuadratureSpec& quad = QuadratureSpec::for_probabilities());

/// put + S0 - e^{-rT} K.
double call_price(double strike, double horizon, const RegimeModel& q_model,
                  double spot,
                  const QuadratureSpec& quad = QuadratureSpec::for_prices());

}  // namespace regimevar
