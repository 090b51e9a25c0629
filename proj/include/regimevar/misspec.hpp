#pragma once

#include "regimevar/hedge.hpp"
#include "regimevar/model.hpp"
#include "regimevar/risk.hpp"
#include "regimevar/simulate.hpp"

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace regimevar {

enum class Instrument { Put, Call };

/// Option prices on a maturity x strike grid.
struct CalibrationGrid {
  std::vector<double> strikes;
  std::vector<double> maturities;
  Eigen::MatrixXd prices;  // rows = maturities, cols = strikes
  Instrument instrument = Instrument::Put;
};

struct GridSpec {
  std::vector<double> strike_ratios{0.8, 0.9, 1.0, 1.1, 1.2};  // times S0
  std::vector<double> maturities{0.5, 1.0, 3.0};
  Instrument instrument = Instrument::Put;
};

/// Black-Scholes European put; sigma = 0 gives the discounted intrinsic value.
double bs_put(double sigma, double strike, double horizon, double spot, double rate);
double bs_call(double sigma, double strike, double horizon, double spot, double rate);

/// Prices every grid cell with the Fourier pricer. Cells run in parallel.
CalibrationGrid synth_grid(const RegimeModel& q_model, double spot,
                           const GridSpec& spec,
                           const QuadratureSpec& quad = QuadratureSpec::for_prices());

/// Cell-by-cell reference for synth_grid.
CalibrationGrid synth_grid_serial(const RegimeModel& q_model, double spot,
                                  const GridSpec& spec,
                                  const QuadratureSpec& quad = QuadratureSpec::for_prices());

/// Shape and static no-arbitrage checks; throws InputError.
void require_valid(const CalibrationGrid& grid, double spot, double rate);

/// Least-squares Black-Scholes volatility over [1e-4, 5]: golden-section
/// searches on the pieces cut at 0.1, 0.3 and 0.8, best one kept.
double calibrate_gbm(const CalibrationGrid& grid, double spot, double rate);

/// Which price of the GBM-chosen put enters the loss when beta is measured.
enum class PremiumSource { TrueModel, Gbm };

struct MisspecOptions {
  GridSpec grid{{0.8, 0.9, 1.0, 1.1, 1.2}, {}, Instrument::Put};  // empty maturities -> {T}
  PremiumSource premium = PremiumSource::TrueModel;
  InversionSettings settings{};
  std::optional<SimConfig> simulation;  // also estimate beta by Monte Carlo
};

struct MisspecReport {
  double sigma_hat = 0.0;
  double mu_hat = 0.0;  // (1/T) log(E^P[S_T] / S0) of the true model
  HedgeSolution gbm_strategy;
  HedgeSolution true_strategy;
  double premium_paid = 0.0;  // put0 of the GBM strike used in the loss
  double beta = 0.0;          // P_true(L^{h_GBM, K_GBM} >= VaR*_GBM)
  std::optional<McEstimate> beta_mc;
};

MisspecReport run_misspec(const RegimeModel& p_model, const RegimeModel& q_model,
                          const MarketSetup& setup, const MisspecOptions& options = {});

}  // namespace regimevar
