#pragma once

#include <complex>
#include <functional>

namespace regimevar {

/// Controls for the Fourier inversion integrals.
struct QuadratureSpec {
  double nu = 1.0;               // contour height Im z
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double truncation_tol = 1e-14;  // bound on the discarded tail beyond U
  int max_intervals = 10000;

  /// nu = 1.5, inside the put strip nu > 1.
  static QuadratureSpec for_prices() { return QuadratureSpec{1.5}; }
  /// nu = 1.0, inside the probability strip nu > 0.
  static QuadratureSpec for_probabilities() { return QuadratureSpec{1.0}; }
};

/// Bound |f(u)| <= scale * exp(-gaussian_rate u^2 - exponential_rate u)
/// used to place the truncation point of a half-line integral.
struct Envelope {
  double scale = 1.0;
  double gaussian_rate = 0.0;
  double exponential_rate = 0.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // sum of local Lobatto/Kronrod differences
  int intervals = 0;
  int evaluations = 0;
  double upper = 0.0;  // truncation point U
};

/// Adaptive Gauss-Lobatto on [a, b]. Each panel carries the 4-point Lobatto
/// rule and its 7-point Kronrod extension; the panel with the largest
/// |K7 - L4| is bisected until the summed estimate drops below
/// max(abs_tol, rel_tol |I|). Throws NumericalError past max_intervals.
QuadratureResult integrate_lobatto(const std::function<double(double)>& f,
                                   double a, double b, double abs_tol,
                                   double rel_tol, int max_intervals,
                                   int initial_panels = 16);

/// Smallest U with scale * int_U^inf exp(-a u^2 - b u) du below tol.
double truncation_point(const Envelope& env, double tol);

/// Re int_0^inf f(u) du, truncated at truncation_point(env, spec).
QuadratureResult integrate_halfline(
    const std::function<std::complex<double>(double)>& f, const Envelope& env,
    const QuadratureSpec& spec);

}  // namespace regimevar
