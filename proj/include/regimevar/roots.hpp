#pragma once

#include <functional>

namespace regimevar {

struct RootOptions {
  double bisect_width = 0.0;  // bisect until the bracket is this narrow
  double f_tol = 0.0;         // stop once |f(x)| <= f_tol
  double x_tol = 0.0;         // or once the bracket is this narrow
  int max_iter = 300;
};

/// Root of f on [lo, hi] given f(lo) and f(hi) of opposite sign: plain
/// bisection down to bisect_width, then Illinois-modified secant steps that
/// never leave the bracket. Returns the iterate with the smallest |f|.
/// Throws NumericalError if the bracket is invalid or max_iter is hit.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double f_lo, double f_hi, const RootOptions& opt);

}  // namespace regimevar
