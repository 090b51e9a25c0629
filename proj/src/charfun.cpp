#include "regimevar/charfun.hpp"

#include "regimevar/errors.hpp"
#include "regimevar/matrix_exp.hpp"

#include <cmath>

namespace regimevar {

namespace {

constexpr cplx kI{0.0, 1.0};

// sinh(x)/x for small |x|.
cplx sinhc_series(cplx x) {
  const cplx x2 = x * x;
  cplx term = 1.0;
  cplx sum = 1.0;
  for (int k = 1; k < 12; ++k) {
    term *= x2 / static_cast<double>((2 * k) * (2 * k + 1));
    sum += term;
  }
  return sum;
}

}  // namespace

cplx jump_gft(const JumpLaw& jump, cplx z) {
  return std::exp(kI * z * jump.mean - 0.5 * z * z * jump.stdev * jump.stdev);
}

std::vector<cplx> regime_exponents(cplx z, const RegimeModel& model) {
  std::vector<cplx> out;
  out.reserve(model.states());
  for (std::size_t j = 0; j < model.states(); ++j) {
    const RegimeParams& p = model.regimes[j];
    const cplx jump_part = jump_gft(p.jump, z) - 1.0;
    out.push_back(z * model.log_drift(j) +
                  0.5 * kI * z * z * (p.sigma * p.sigma) -
                  kI * p.lambda * jump_part);
  }
  return out;
}

cplx gft_matrix(cplx z, double horizon, const RegimeModel& model) {
  const auto m = static_cast<Eigen::Index>(model.states());
  const auto theta = regime_exponents(z, model);
  Eigen::MatrixXcd a = model.generator.transpose().cast<cplx>();
  for (Eigen::Index j = 0; j < m; ++j) a(j, j) += kI * theta[static_cast<std::size_t>(j)];
  const Eigen::MatrixXcd e = expm(a * horizon);
  return e.col(static_cast<Eigen::Index>(model.initial_regime)).sum();
}

cplx gft_two_state(cplx z, double horizon, const RegimeModel& model) {
  if (model.states() != 2)
    throw InputError("gft_two_state requires a two-state model");
  const auto th = regime_exponents(z, model);
  const double q1 = model.generator(0, 1);
  const double q2 = model.generator(1, 0);
  const cplx theta = th[0] - th[1];
  const cplx c = (q1 + q2) - kI * theta;
  const cplx m = -0.5 * c;
  const cplx d = std::sqrt(0.25 * c * c + kI * theta * q2);
  const cplx shift = kI * th[1];
  const double t = horizon;

  // With y = m +- d:
  //   q1^T = e^{mT} [ (i theta - m) T sinh(dT)/(dT) + cosh(dT) ]
  //   q2^T = e^{mT} [ cosh(dT) - m T sinh(dT)/(dT) ]
  // which stays finite as y1 -> y2. The e^{i vartheta_2 T} factor is folded
  // into the exponentials.
  const cplx dt = d * t;
  cplx ch;
  cplx sc;
  if (std::abs(dt) < 0.5) {
    const cplx w = std::exp((m + shift) * t);
    ch = w * std::cosh(dt);
    sc = w * t * sinhc_series(dt);
  } else {
    const cplx e1 = std::exp((m + d + shift) * t);
    const cplx e2 = std::exp((m - d + shift) * t);
    ch = 0.5 * (e1 + e2);
    sc = (e1 - e2) / (2.0 * d);
  }
  if (model.initial_regime == 0) return (kI * theta - m) * sc + ch;
  return ch - m * sc;
}

cplx characteristic_function(cplx z, double horizon, const RegimeModel& model) {
  switch (model.states()) {
    case 1:
      return std::exp(kI * regime_exponents(z, model)[0] * horizon);
    case 2:
      return gft_two_state(z, horizon, model);
    default:
      return gft_matrix(z, horizon, model);
  }
}

LogReturnMoments log_return_moments(double horizon, const RegimeModel& model) {
  constexpr double h = 1e-4;
  // phi(-i t) = E[exp(t X_T)] is real and positive.
  const double kp =
      std::log(characteristic_function(cplx{0.0, -h}, horizon, model).real());
  const double km =
      std::log(characteristic_function(cplx{0.0, h}, horizon, model).real());
  LogReturnMoments out;
  out.mean = (kp - km) / (2.0 * h);
  const double var = (kp + km) / (h * h);
  out.stdev = var > 0.0 ? std::sqrt(var) : 0.0;
  if (!std::isfinite(out.mean) || !std::isfinite(out.stdev))
    throw NumericalError("log-return moments are not finite");
  return out;
}

}  // namespace regimevar
