#include "regimevar/model.hpp"

#include "regimevar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace regimevar {

namespace {

constexpr double kRowSumTolerance = 1e-10;

bool finite(double x) { return std::isfinite(x); }

std::string join(const std::vector<std::string>& items) {
  std::ostringstream os;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) os << "; ";
    os << items[i];
  }
  return os.str();
}

}  // namespace

double RegimeModel::rate() const {
  if (const auto* rn = std::get_if<RiskNeutral>(&measure)) return rn->rate;
  throw InputError("model is not risk-neutral");
}

double RegimeModel::log_drift(std::size_t regime) const {
  const RegimeParams& p = regimes.at(regime);
  const double half_var = 0.5 * p.sigma * p.sigma;
  if (const auto* rn = std::get_if<RiskNeutral>(&measure)) {
    return rn->rate - half_var - p.lambda * kappa(p.jump);
  }
  return p.mu - half_var;
}

double RegimeModel::min_sigma() const {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& p : regimes) s = std::min(s, p.sigma);
  return s;
}

MeasureChangeSpec MeasureChangeSpec::identity(
    const std::vector<RegimeParams>& regimes) {
  const auto m = static_cast<Eigen::Index>(regimes.size());
  MeasureChangeSpec spec;
  spec.psi.assign(regimes.size(), 1.0);
  for (const auto& p : regimes) spec.q_jump.push_back(p.jump);
  spec.phi = Eigen::MatrixXd::Ones(m, m);
  return spec;
}

std::vector<std::string> validate(const RegimeModel& model) {
  std::vector<std::string> out;
  const std::size_t m = model.states();
  if (m == 0) {
    out.emplace_back("states: at least one regime required");
    return out;
  }
  const auto mi = static_cast<Eigen::Index>(m);
  if (model.generator.rows() != mi || model.generator.cols() != mi) {
    std::ostringstream os;
    os << "generator: expected " << m << "x" << m << ", got "
       << model.generator.rows() << "x" << model.generator.cols();
    out.push_back(os.str());
  } else {
    for (Eigen::Index i = 0; i < mi; ++i) {
      double row_sum = 0.0;
      double row_scale = 0.0;
      bool row_finite = true;
      for (Eigen::Index j = 0; j < mi; ++j) {
        const double q = model.generator(i, j);
        if (!finite(q)) row_finite = false;
        row_sum += q;
        row_scale = std::max(row_scale, std::abs(q));
        if (i != j && q < 0.0) {
          std::ostringstream os;
          os << "generator entry (" << i + 1 << "," << j + 1
             << ") must be >= 0";
          out.push_back(os.str());
        }
      }
      if (!row_finite) {
        out.push_back("generator row " + std::to_string(i + 1) +
                      " has non-finite entries");
      } else if (std::abs(row_sum) > kRowSumTolerance * (1.0 + row_scale)) {
        std::ostringstream os;
        os << "generator row " << i + 1 << " sums to " << row_sum
           << " (must be 0)";
        out.push_back(os.str());
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const RegimeParams& p = model.regimes[i];
    const std::string tag = " regime " + std::to_string(i + 1);
    if (!finite(p.mu)) out.push_back("mu" + tag + " must be finite");
    if (!(p.sigma > 0.0) || !finite(p.sigma))
      out.push_back("sigma" + tag + " must be > 0");
    if (!(p.lambda >= 0.0) || !finite(p.lambda))
      out.push_back("lambda" + tag + " must be >= 0");
    if (!finite(p.jump.mean)) out.push_back("jump.a" + tag + " must be finite");
    if (!(p.jump.stdev >= 0.0) || !finite(p.jump.stdev))
      out.push_back("jump.b" + tag + " must be >= 0");
  }
  if (model.initial_regime >= m) {
    out.push_back("initial_state must be in 1.." + std::to_string(m));
  }
  if (const auto* rn = std::get_if<RiskNeutral>(&model.measure)) {
    if (!finite(rn->rate)) out.emplace_back("measure.Q.r must be finite");
  }
  return out;
}

std::vector<std::string> validate(const MarketSetup& s) {
  std::vector<std::string> out;
  if (!(s.spot > 0.0) || !finite(s.spot)) out.emplace_back("S0 must be > 0");
  if (!finite(s.rate)) out.emplace_back("rate must be finite");
  if (!(s.horizon > 0.0) || !finite(s.horizon))
    out.emplace_back("horizon T must be > 0");
  if (!(s.alpha > 0.0 && s.alpha < 1.0))
    out.emplace_back("alpha must be in (0,1)");
  if (!(s.budget >= 0.0) || !finite(s.budget))
    out.emplace_back("budget C must be >= 0");
  return out;
}

void require_valid(const RegimeModel& model) {
  const auto v = validate(model);
  if (!v.empty()) throw InputError("invalid model: " + join(v));
}

void require_valid(const MarketSetup& setup) {
  const auto v = validate(setup);
  if (!v.empty()) throw InputError("invalid market setup: " + join(v));
}

double kappa(const JumpLaw& jump) {
  return std::expm1(jump.mean + 0.5 * jump.stdev * jump.stdev);
}

namespace {

void check_spec(const RegimeModel& p_model, const MeasureChangeSpec& spec) {
  require_valid(p_model);
  if (p_model.risk_neutral())
    throw InputError("measure change expects a historical model");
  const std::size_t m = p_model.states();
  const auto mi = static_cast<Eigen::Index>(m);
  if (spec.psi.size() != m || spec.q_jump.size() != m ||
      spec.phi.rows() != mi || spec.phi.cols() != mi) {
    throw InputError("measure change spec dimensions do not match M = " +
                     std::to_string(m));
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!(spec.psi[i] > 0.0))
      throw InputError("psi regime " + std::to_string(i + 1) + " must be > 0");
    if (!(spec.q_jump[i].stdev >= 0.0))
      throw InputError("q_jump.b regime " + std::to_string(i + 1) +
                       " must be >= 0");
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j && !(spec.phi(static_cast<Eigen::Index>(i),
                               static_cast<Eigen::Index>(j)) > 0.0)) {
        throw InputError("phi(" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ") must be > 0");
      }
    }
  }
}

double girsanov_shift(const RegimeParams& p, double psi, const JumpLaw& q_jump,
                      double rate) {
  return (rate - p.mu - psi * p.lambda * kappa(q_jump)) / p.sigma;
}

}  // namespace

MeasureChange apply_measure_change(const RegimeModel& p_model,
                                   const MeasureChangeSpec& spec, double rate) {
  check_spec(p_model, spec);
  const std::size_t m = p_model.states();
  const auto mi = static_cast<Eigen::Index>(m);

  MeasureChange out;
  RegimeModel& q = out.model;
  q.initial_regime = p_model.initial_regime;
  q.measure = RiskNeutral{rate};
  q.generator = Eigen::MatrixXd::Zero(mi, mi);
  for (Eigen::Index i = 0; i < mi; ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < mi; ++j) {
      if (i == j) continue;
      q.generator(i, j) = spec.phi(i, j) * p_model.generator(i, j);
      off += q.generator(i, j);
    }
    q.generator(i, i) = -off;
  }
  q.regimes.reserve(m);
  out.girsanov_shift.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const RegimeParams& p = p_model.regimes[i];
    RegimeParams rq = p;
    rq.lambda = spec.psi[i] * p.lambda;
    rq.jump = spec.q_jump[i];
    q.regimes.push_back(rq);
    out.girsanov_shift.push_back(
        girsanov_shift(p, spec.psi[i], spec.q_jump[i], rate));
  }
  return out;
}

double market_price_of_risk(const RegimeModel& p_model,
                            const MeasureChangeSpec& spec, double rate,
                            std::size_t regime) {
  check_spec(p_model, spec);
  const RegimeParams& p = p_model.regimes.at(regime);
  return p.mu + p.lambda * kappa(p.jump) - rate;
}

double market_price_of_risk_decomposed(const RegimeModel& p_model,
                                       const MeasureChangeSpec& spec,
                                       double rate, std::size_t regime) {
  check_spec(p_model, spec);
  const RegimeParams& p = p_model.regimes.at(regime);
  const double psi = spec.psi.at(regime);
  const JumpLaw& qj = spec.q_jump.at(regime);
  const double theta = girsanov_shift(p, psi, qj, rate);
  return p.lambda * (kappa(p.jump) - psi * kappa(qj)) - p.sigma * theta;
}

RegimeModel gbm_model(double mu, double sigma, Measure measure) {
  return merton_model(mu, sigma, 0.0, JumpLaw{}, measure);
}

RegimeModel merton_model(double mu, double sigma, double lambda, JumpLaw jump,
                         Measure measure) {
  RegimeModel m;
  m.generator = Eigen::MatrixXd::Zero(1, 1);
  m.regimes.push_back(RegimeParams{mu, sigma, lambda, jump});
  m.measure = measure;
  return m;
}

RegimeModel two_state_model(const RegimeParams& first,
                            const RegimeParams& second, double q1, double q2,
                            std::size_t initial_regime, Measure measure) {
  RegimeModel m;
  m.generator.resize(2, 2);
  m.generator << -q1, q1, q2, -q2;
  m.regimes = {first, second};
  m.initial_regime = initial_regime;
  m.measure = measure;
  return m;
}

}  // namespace regimevar
