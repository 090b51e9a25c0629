#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace regimevar {

/// Gaussian law of the log-jump size Y ~ N(mean, stdev^2).
struct JumpLaw {
  double mean = 0.0;
  double stdev = 0.0;
};

/// Annualized parameters of one regime.
struct RegimeParams {
  double mu = 0.0;      // drift of dS/S before jumps; unused under Q
  double sigma = 0.0;   // diffusion volatility, strictly positive
  double lambda = 0.0;  // jump intensity
  JumpLaw jump{};
};

struct Historical {};
struct RiskNeutral {
  double rate = 0.0;
};
using Measure = std::variant<Historical, RiskNeutral>;

/// Complete M-state regime-switching jump-diffusion under one measure.
///
/// The log-return X_t = log(S_t / S_0) has regime drift
///   xi(i) = mu_i - sigma_i^2/2                      (historical)
///   xi(i) = r - sigma_i^2/2 - lambda_i kappa(i)     (risk-neutral)
/// so a risk-neutral model is a martingale by construction whatever mu holds.
struct RegimeModel {
  Eigen::MatrixXd generator;  // M x M, off-diagonal >= 0, zero row sums
  std::vector<RegimeParams> regimes;
  std::size_t initial_regime = 0;  // zero-based; documents use 1..M
  Measure measure = Historical{};

  std::size_t states() const { return regimes.size(); }
  bool risk_neutral() const { return std::holds_alternative<RiskNeutral>(measure); }
  /// Risk-free rate of a risk-neutral model; throws InputError otherwise.
  double rate() const;
  /// xi(i), the regime log-drift under this model's measure.
  double log_drift(std::size_t regime) const;
  double min_sigma() const;
};

/// Data mapping a historical model to an equivalent risk-neutral one.
struct MeasureChangeSpec {
  std::vector<double> psi;        // jump-intensity scalers, > 0
  std::vector<JumpLaw> q_jump;    // tilted jump laws under Q
  Eigen::MatrixXd phi;            // generator scalers, diagonal unused

  /// psi = 1, Phi = 1 and unchanged jump laws: only the Brownian drift moves.
  static MeasureChangeSpec identity(const std::vector<RegimeParams>& regimes);
};

struct MarketSetup {
  double spot = 100.0;
  double rate = 0.0;
  double horizon = 1.0;
  double alpha = 0.01;
  double budget = 0.0;
};

std::vector<std::string> validate(const RegimeModel& model);
std::vector<std::string> validate(const MarketSetup& setup);
/// Throws InputError listing every violation.
void require_valid(const RegimeModel& model);
void require_valid(const MarketSetup& setup);

/// E[e^Y - 1] for gaussian log-jumps.
double kappa(const JumpLaw& jump);

struct MeasureChange {
  RegimeModel model;                   // risk-neutral
  std::vector<double> girsanov_shift;  // theta(i), diagnostic only
};

MeasureChange apply_measure_change(const RegimeModel& p_model,
                                   const MeasureChangeSpec& spec, double rate);

/// Excess expected return of regime i: mu + lambda*kappa - r.
double market_price_of_risk(const RegimeModel& p_model,
                            const MeasureChangeSpec& spec, double rate,
                            std::size_t regime);

/// Same quantity assembled from the measure change,
/// lambda*(kappa - psi*kappa^Q) - sigma*theta.
double market_price_of_risk_decomposed(const RegimeModel& p_model,
                                       const MeasureChangeSpec& spec,
                                       double rate, std::size_t regime);

/// Single-regime geometric Brownian motion (M = 1, no jumps).
RegimeModel gbm_model(double mu, double sigma, Measure measure = Historical{});

/// Single-regime Merton jump-diffusion.
RegimeModel merton_model(double mu, double sigma, double lambda, JumpLaw jump,
                         Measure measure = Historical{});

/// Two-state model with generator (-q1, q1; q2, -q2).
RegimeModel two_state_model(const RegimeParams& first,
                            const RegimeParams& second, double q1, double q2,
                            std::size_t initial_regime = 0,
                            Measure measure = Historical{});

}  // namespace regimevar
