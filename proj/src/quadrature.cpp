#include "regimevar/quadrature.hpp"

#include "regimevar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace regimevar {

namespace {

// Lobatto 4-point nodes +-1, +-1/sqrt(5); Kronrod adds 0, +-sqrt(2/3).
const double kAlpha = std::sqrt(2.0 / 3.0);
const double kBeta = 1.0 / std::sqrt(5.0);

struct Panel {
  double a, b;
  double fa, fm, fb;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const {
    return x.error < y.error;
  }
};

class Evaluator {
 public:
  explicit Evaluator(const std::function<double(double)>& f) : f_(f) {}
  double operator()(double x) {
    ++count;
    const double y = f_(x);
    if (!std::isfinite(y))
      throw NumericalError("quadrature: integrand is not finite at u = " +
                           std::to_string(x));
    return y;
  }
  int count = 0;

 private:
  const std::function<double(double)>& f_;
};

Panel make_panel(Evaluator& f, double a, double b, double fa, double fb) {
  const double m = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fmll = f(m - kAlpha * h);
  const double fml = f(m - kBeta * h);
  const double fm = f(m);
  const double fmr = f(m + kBeta * h);
  const double fmrr = f(m + kAlpha * h);
  const double lobatto = (h / 6.0) * (fa + fb + 5.0 * (fml + fmr));
  const double kronrod = (h / 1470.0) * (77.0 * (fa + fb) +
                                         432.0 * (fmll + fmrr) +
                                         625.0 * (fml + fmr) + 672.0 * fm);
  return Panel{a, b, fa, fm, fb, kronrod, std::abs(kronrod - lobatto)};
}

double tail_bound(const Envelope& env, double u) {
  const double rate = 2.0 * env.gaussian_rate * u + env.exponential_rate;
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return env.scale *
         std::exp(-env.gaussian_rate * u * u - env.exponential_rate * u) / rate;
}

}  // namespace

QuadratureResult integrate_lobatto(const std::function<double(double)>& f,
                                   double a, double b, double abs_tol,
                                   double rel_tol, int max_intervals,
                                   int initial_panels) {
  QuadratureResult out;
  out.upper = b;
  if (!(b > a)) return out;
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_intervals < 1)
    throw InputError("quadrature: tolerances must be > 0");

  Evaluator eval(f);
  const int n0 = std::clamp(initial_panels, 1, max_intervals);
  std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
  std::vector<Panel> settled;

  double left = a;
  double f_left = eval(a);
  for (int i = 1; i <= n0; ++i) {
    const double right = i == n0 ? b : a + (b - a) * i / n0;
    const double f_right = eval(right);
    heap.push(make_panel(eval, left, right, f_left, f_right));
    left = right;
    f_left = f_right;
  }

  auto totals = [&](double& value, double& error) {
    value = 0.0;
    error = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    for (const auto& p : settled) value += p.value;
  };

  double value = 0.0;
  double error = 0.0;
  totals(value, error);
  while (!heap.empty() && error > std::max(abs_tol, rel_tol * std::abs(value))) {
    if (static_cast<int>(heap.size() + settled.size()) >= max_intervals) {
      throw NumericalError("quadrature: max_intervals (" +
                           std::to_string(max_intervals) +
                           ") exceeded, error estimate " +
                           std::to_string(error));
    }
    Panel worst = heap.top();
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b)) {
      // No machine numbers left inside the panel.
      error -= worst.error;
      settled.push_back(worst);
      continue;
    }
    Panel lhs = make_panel(eval, worst.a, m, worst.fa, worst.fm);
    Panel rhs = make_panel(eval, m, worst.b, worst.fm, worst.fb);
    value += lhs.value + rhs.value - worst.value;
    error += lhs.error + rhs.error - worst.error;
    heap.push(lhs);
    heap.push(rhs);
  }
  totals(value, error);

  out.value = value;
  out.error = error;
  out.intervals = static_cast<int>(heap.size() + settled.size());
  out.evaluations = eval.count;
  return out;
}

double truncation_point(const Envelope& env, double tol) {
  if (!(env.scale > 0.0)) return 0.0;
  if (!(env.gaussian_rate > 0.0) && !(env.exponential_rate > 0.0))
    throw InputError("quadrature: envelope has no decay, cannot truncate");
  if (!(tol > 0.0)) throw InputError("quadrature: truncation_tol must be > 0");
  double hi = 1.0;
  int guard = 0;
  while (tail_bound(env, hi) > tol) {
    hi *= 2.0;
    if (++guard > 200) throw NumericalError("quadrature: truncation not found");
  }
  double lo = 0.0;
  for (int i = 0; i < 60 && hi - lo > 1e-6 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (tail_bound(env, mid) > tol) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

QuadratureResult integrate_halfline(
    const std::function<std::complex<double>(double)>& f, const Envelope& env,
    const QuadratureSpec& spec) {
  const double upper = truncation_point(env, spec.truncation_tol);
  QuadratureResult res;
  if (upper > 0.0) {
    res = integrate_lobatto([&f](double u) { return f(u).real(); }, 0.0, upper,
                            spec.abs_tol, spec.rel_tol, spec.max_intervals);
  }
  res.upper = upper;
  return res;
}

}  // namespace regimevar
