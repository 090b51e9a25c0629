#include "regimevar/misspec.hpp"

#include "regimevar/charfun.hpp"
#include "regimevar/errors.hpp"
#include "regimevar/transform.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

namespace regimevar {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

void check_spec(const GridSpec& spec) {
  if (spec.strike_ratios.empty() || spec.maturities.empty())
    throw InputError("calibration grid needs at least one strike and one maturity");
  for (double k : spec.strike_ratios)
    if (!(k > 0.0)) throw InputError("strike ratios must be > 0");
  for (double t : spec.maturities)
    if (!(t > 0.0)) throw InputError("maturities must be > 0");
}

CalibrationGrid empty_grid(const GridSpec& spec, double spot) {
  CalibrationGrid g;
  g.instrument = spec.instrument;
  g.maturities = spec.maturities;
  for (double k : spec.strike_ratios) g.strikes.push_back(k * spot);
  g.prices.resize(static_cast<Eigen::Index>(g.maturities.size()),
                  static_cast<Eigen::Index>(g.strikes.size()));
  return g;
}

double grid_cell(const CalibrationGrid& g, std::size_t cell, const RegimeModel& q_model,
                 double spot, const QuadratureSpec& quad) {
  const std::size_t nk = g.strikes.size();
  const double t = g.maturities[cell / nk];
  const double k = g.strikes[cell % nk];
  return g.instrument == Instrument::Put ? put_price(k, t, q_model, spot, quad)
                                         : call_price(k, t, q_model, spot, quad);
}

double golden_section(const std::function<double(double)>& f, double a, double b,
                      double width) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > width) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double bs_put(double sigma, double strike, double horizon, double spot, double rate) {
  const double disc_k = strike * std::exp(-rate * horizon);
  if (!(sigma > 0.0)) return std::max(disc_k - spot, 0.0);
  const double sd = sigma * std::sqrt(horizon);
  const double d1 = (std::log(spot / disc_k) + 0.5 * sd * sd) / sd;
  const double d2 = d1 - sd;
  return disc_k * norm_cdf(-d2) - spot * norm_cdf(-d1);
}

double bs_call(double sigma, double strike, double horizon, double spot, double rate) {
  const double disc_k = strike * std::exp(-rate * horizon);
  if (!(sigma > 0.0)) return std::max(spot - disc_k, 0.0);
  const double sd = sigma * std::sqrt(horizon);
  const double d1 = (std::log(spot / disc_k) + 0.5 * sd * sd) / sd;
  const double d2 = d1 - sd;
  return spot * norm_cdf(d1) - disc_k * norm_cdf(d2);
}

CalibrationGrid synth_grid(const RegimeModel& q_model, double spot,
                           const GridSpec& spec, const QuadratureSpec& quad) {
  check_spec(spec);
  CalibrationGrid g = empty_grid(spec, spot);
  const std::size_t cells = g.strikes.size() * g.maturities.size();
  std::vector<double> values(cells);
  std::vector<std::exception_ptr> failures(cells);
  const auto n = static_cast<long>(cells);
#pragma omp parallel for schedule(dynamic)
  for (long c = 0; c < n; ++c) {
    const auto cell = static_cast<std::size_t>(c);
    try {
      values[cell] = grid_cell(g, cell, q_model, spot, quad);
    } catch (...) {
      failures[cell] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  const std::size_t nk = g.strikes.size();
  for (std::size_t c = 0; c < cells; ++c)
    g.prices(static_cast<Eigen::Index>(c / nk), static_cast<Eigen::Index>(c % nk)) = values[c];
  return g;
}

CalibrationGrid synth_grid_serial(const RegimeModel& q_model, double spot,
                                  const GridSpec& spec, const QuadratureSpec& quad) {
  check_spec(spec);
  CalibrationGrid g = empty_grid(spec, spot);
  const std::size_t nk = g.strikes.size();
  for (std::size_t c = 0; c < nk * g.maturities.size(); ++c)
    g.prices(static_cast<Eigen::Index>(c / nk), static_cast<Eigen::Index>(c % nk)) =
        grid_cell(g, c, q_model, spot, quad);
  return g;
}

void require_valid(const CalibrationGrid& grid, double spot, double rate) {
  if (grid.strikes.empty() || grid.maturities.empty())
    throw InputError("calibration grid is empty");
  if (grid.prices.rows() != static_cast<Eigen::Index>(grid.maturities.size()) ||
      grid.prices.cols() != static_cast<Eigen::Index>(grid.strikes.size()))
    throw InputError("calibration grid prices must be maturities x strikes");
  for (std::size_t i = 0; i < grid.maturities.size(); ++i) {
    const double t = grid.maturities[i];
    if (!(t > 0.0)) throw InputError("maturities must be > 0");
    for (std::size_t j = 0; j < grid.strikes.size(); ++j) {
      const double k = grid.strikes[j];
      if (!(k > 0.0)) throw InputError("strikes must be > 0");
      const double disc_k = k * std::exp(-rate * t);
      const double p = grid.prices(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double lo = grid.instrument == Instrument::Put ? std::max(disc_k - spot, 0.0)
                                                           : std::max(spot - disc_k, 0.0);
      const double hi = grid.instrument == Instrument::Put ? disc_k : spot;
      const double slack = 1e-9 * std::max(spot, k);
      if (!std::isfinite(p) || p < lo - slack || p > hi + slack)
        throw InputError("grid price (" + std::to_string(i) + "," + std::to_string(j) +
                         ") violates no-arbitrage bounds");
    }
  }
}

double calibrate_gbm(const CalibrationGrid& grid, double spot, double rate) {
  require_valid(grid, spot, rate);
  auto objective = [&](double sigma) {
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.maturities.size(); ++i) {
      for (std::size_t j = 0; j < grid.strikes.size(); ++j) {
        const double model =
            grid.instrument == Instrument::Put
                ? bs_put(sigma, grid.strikes[j], grid.maturities[i], spot, rate)
                : bs_call(sigma, grid.strikes[j], grid.maturities[i], spot, rate);
        const double e =
            model - grid.prices(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        sum += e * e;
      }
    }
    if (!std::isfinite(sum)) throw NumericalError("calibration objective is not finite");
    return sum;
  };
  const double cuts[] = {1e-4, 0.1, 0.3, 0.8, 5.0};
  double best = 0.0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) {
    const double s = golden_section(objective, cuts[k], cuts[k + 1], 1e-8);
    const double v = objective(s);
    if (v < best_value) {
      best_value = v;
      best = s;
    }
  }
  return best;
}

MisspecReport run_misspec(const RegimeModel& p_model, const RegimeModel& q_model,
                          const MarketSetup& setup, const MisspecOptions& options) {
  require_valid(setup);
  require_valid(p_model);
  require_valid(q_model);
  const double r = setup.rate;
  const double t = setup.horizon;

  GridSpec spec = options.grid;
  if (spec.maturities.empty()) spec.maturities = {t};
  const CalibrationGrid grid = synth_grid(q_model, setup.spot, spec, options.settings.price);

  MisspecReport rep;
  rep.sigma_hat = calibrate_gbm(grid, setup.spot, r);
  const double growth = characteristic_function(cplx{0.0, -1.0}, t, p_model).real();
  if (!(growth > 0.0) || !std::isfinite(growth))
    throw NumericalError("E^P[S_T] is not finite and positive");
  rep.mu_hat = std::log(growth) / t;

  const RegimeModel gbm_p = gbm_model(rep.mu_hat, rep.sigma_hat);
  const RegimeModel gbm_q = gbm_model(r, rep.sigma_hat, RiskNeutral{r});
  rep.gbm_strategy = solve_hedge(setup, gbm_p, gbm_q, options.settings);
  rep.true_strategy = solve_hedge(setup, p_model, q_model, options.settings);

  const HedgeSolution& g = rep.gbm_strategy;
  if (g.boundary == HedgeBoundary::Infeasible) {
    rep.premium_paid = 0.0;
  } else if (options.premium == PremiumSource::TrueModel) {
    rep.premium_paid = put_price(g.strike, t, q_model, setup.spot, options.settings.price);
  } else {
    rep.premium_paid = g.premium;
  }
  const LossSpec loss{setup, g.fraction, g.strike, rep.premium_paid};
  rep.beta = hedged_loss_tail_prob(g.hedged_var, loss, p_model, options.settings.probability);
  if (!std::isfinite(rep.beta)) throw NumericalError("beta is not finite");
  if (options.simulation)
    rep.beta_mc = mc_beta(p_model, loss, g.hedged_var, *options.simulation);
  return rep;
}

}  // namespace regimevar
