#pragma once

#include "regimevar/model.hpp"
#include "regimevar/risk.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace regimevar {

/// Regime path on [0, T]: states[k] holds on [switch_times[k-1], switch_times[k]).
struct ChainPath {
  std::vector<double> switch_times;
  std::vector<std::size_t> states;
};

struct SimConfig {
  std::size_t paths = 1'000'000;
  std::uint64_t seed = 0;
  bool antithetic = false;  // negates the Brownian draw only
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Random source for one block of paths. Blocks are seeded from
/// (seed, block index), so results do not depend on thread count.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t block);

  double uniform();  // in [0, 1)
  double normal();
  double exponential(double rate);
  long poisson(double mean);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Paths per block; the unit of parallel work and of the summation tree.
inline constexpr std::size_t kBlockPaths = 4096;

ChainPath sample_chain(const RegimeModel& model, double horizon, Stream& rng);

/// Exact draw of X_T: the chain is sampled first, then per segment the drift,
/// diffusion variance and a compound-Poisson jump sum, then one gaussian for
/// the accumulated diffusion.
double sample_terminal_log(const RegimeModel& model, double horizon, Stream& rng);

/// Mean of payoff(X_T) with its standard error. Runs blocks in parallel and
/// merges block statistics pairwise in fixed order.
McEstimate mc_expectation(const RegimeModel& model, double horizon,
                          const SimConfig& cfg,
                          const std::function<double(double)>& payoff);

/// Single-threaded reference; bit-identical to mc_expectation.
McEstimate mc_expectation_serial(const RegimeModel& model, double horizon,
                                 const SimConfig& cfg,
                                 const std::function<double(double)>& payoff);

/// cfg.paths draws of X_T in path order (antithetic flag ignored).
std::vector<double> sample_terminal_logs(const RegimeModel& model, double horizon,
                                         const SimConfig& cfg);

/// Frequency of S0 e^{X_T} < v.
McEstimate mc_cdf(const RegimeModel& model, double horizon, double spot,
                  double level, const SimConfig& cfg);

/// e^{-rT} E[(K - S_T)^+] under a risk-neutral model.
McEstimate mc_put(const RegimeModel& q_model, double horizon, double spot,
                  double strike, const SimConfig& cfg);

/// Frequency of L^{h,K} >= v with S_T drawn from p_model.
McEstimate mc_beta(const RegimeModel& p_model, const LossSpec& loss,
                   double threshold, const SimConfig& cfg);

/// Empirical p-quantile of S_T. The error is half the distance between the
/// order statistics one binomial standard deviation either side.
McEstimate mc_quantile(const RegimeModel& model, double horizon, double spot,
                       double p, const SimConfig& cfg);

}  // namespace regimevar
