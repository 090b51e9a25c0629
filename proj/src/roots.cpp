#include "regimevar/roots.hpp"

#include "regimevar/errors.hpp"

#include <algorithm>
#include <cmath>

namespace regimevar {

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double f_lo, double f_hi, const RootOptions& opt) {
  if (!(lo < hi)) throw NumericalError("root search: empty bracket");
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi))
    throw NumericalError("root search: non-finite function value at bracket");
  if (std::abs(f_lo) <= opt.f_tol) return lo;
  if (std::abs(f_hi) <= opt.f_tol) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0))
    throw NumericalError("root search: bracket does not change sign");

  double best = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
  double best_f = std::min(std::abs(f_lo), std::abs(f_hi));
  auto eval = [&](double x) {
    const double y = f(x);
    if (!std::isfinite(y))
      throw NumericalError("root search: non-finite function value");
    if (std::abs(y) < best_f) {
      best_f = std::abs(y);
      best = x;
    }
    return y;
  };

  int iter = 0;
  while (hi - lo > opt.bisect_width) {
    if (++iter > opt.max_iter) throw NumericalError("root search: no convergence");
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) return best;
    const double fm = eval(mid);
    if (std::abs(fm) <= opt.f_tol) return mid;
    if ((fm > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
      f_hi = fm;
    }
  }

  // Illinois: halve the retained endpoint's value when the same side moves
  // twice, which restores superlinear convergence of regula falsi.
  int side = 0;
  while (hi - lo > opt.x_tol) {
    if (++iter > opt.max_iter) throw NumericalError("root search: no convergence");
    double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    if (!(x > lo && x < hi)) break;
    const double fx = eval(x);
    if (std::abs(fx) <= opt.f_tol) return x;
    if ((fx > 0.0) == (f_lo > 0.0)) {
      lo = x;
      f_lo = fx;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = x;
      f_hi = fx;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
  }
  return best;
}

}  // namespace regimevar
