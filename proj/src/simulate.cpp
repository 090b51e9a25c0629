#include "regimevar/simulate.hpp"

#include "regimevar/errors.hpp"

#include <algorithm>
#include <cmath>

namespace regimevar {

namespace {

struct BlockStats {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
};

BlockStats merge(const BlockStats& a, const BlockStats& b) {
  if (a.count == 0.0) return b;
  if (b.count == 0.0) return a;
  BlockStats out;
  out.count = a.count + b.count;
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * (b.count / out.count);
  out.m2 = a.m2 + b.m2 + delta * delta * (a.count * b.count / out.count);
  return out;
}

BlockStats reduce_pairwise(const std::vector<BlockStats>& blocks, std::size_t lo,
                           std::size_t hi) {
  if (hi - lo == 1) return blocks[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return merge(reduce_pairwise(blocks, lo, mid), reduce_pairwise(blocks, mid, hi));
}

// Walks the chain and calls visit(state, duration) for every segment.
template <class Visit>
void walk_chain(const RegimeModel& model, double horizon, Stream& rng,
                std::vector<double>* switches, Visit&& visit) {
  std::size_t state = model.initial_regime;
  const std::size_t m = model.states();
  double t = 0.0;
  for (;;) {
    const double rate = -model.generator(state, state);
    const double hold = rate > 0.0 ? rng.exponential(rate) : horizon;
    if (t + hold >= horizon) {
      visit(state, horizon - t);
      return;
    }
    visit(state, hold);
    t += hold;
    double pick = rng.uniform() * rate;
    std::size_t next = state;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == state) continue;
      const double q = model.generator(state, j);
      if (q <= 0.0) continue;
      next = j;
      if (pick < q) break;
      pick -= q;
    }
    if (switches) switches->push_back(t);
    state = next;
  }
}

struct Segments {
  double drift = 0.0;
  double variance = 0.0;
  double jumps = 0.0;
};

Segments sample_segments(const RegimeModel& model, double horizon, Stream& rng) {
  Segments acc;
  walk_chain(model, horizon, rng, nullptr, [&](std::size_t i, double dt) {
    const RegimeParams& p = model.regimes[i];
    acc.drift += model.log_drift(i) * dt;
    acc.variance += p.sigma * p.sigma * dt;
    if (p.lambda > 0.0) {
      const long n = rng.poisson(p.lambda * dt);
      if (n > 0) {
        const double dn = static_cast<double>(n);
        acc.jumps += dn * p.jump.mean + p.jump.stdev * std::sqrt(dn) * rng.normal();
      }
    }
  });
  return acc;
}

void check_config(const SimConfig& cfg, double horizon) {
  if (cfg.paths < 1) throw InputError("paths must be >= 1");
  if (cfg.antithetic && cfg.paths % 2 != 0)
    throw InputError("antithetic sampling needs an even path count");
  if (!(horizon > 0.0)) throw InputError("horizon must be > 0");
}

BlockStats run_block(const RegimeModel& model, double horizon, const SimConfig& cfg,
                     const std::function<double(double)>& payoff, std::size_t block) {
  Stream rng(cfg.seed, block);
  const std::size_t first = block * kBlockPaths;
  const std::size_t last = std::min(cfg.paths, first + kBlockPaths);
  BlockStats s;
  auto add = [&](double y) {
    s.count += 1.0;
    const double delta = y - s.mean;
    s.mean += delta / s.count;
    s.m2 += delta * (y - s.mean);
  };
  if (cfg.antithetic) {
    for (std::size_t k = first; k < last; k += 2) {
      const Segments seg = sample_segments(model, horizon, rng);
      const double z = rng.normal() * std::sqrt(seg.variance);
      const double base = seg.drift + seg.jumps;
      add(0.5 * (payoff(base + z) + payoff(base - z)));
    }
  } else {
    for (std::size_t k = first; k < last; ++k) {
      const Segments seg = sample_segments(model, horizon, rng);
      add(payoff(seg.drift + seg.jumps + std::sqrt(seg.variance) * rng.normal()));
    }
  }
  return s;
}

std::size_t block_count(const SimConfig& cfg) {
  return (cfg.paths + kBlockPaths - 1) / kBlockPaths;
}

McEstimate finish(const std::vector<BlockStats>& blocks) {
  const BlockStats total = reduce_pairwise(blocks, 0, blocks.size());
  McEstimate out;
  out.value = total.mean;
  if (total.count > 1.0)
    out.std_error = std::sqrt(total.m2 / (total.count - 1.0) / total.count);
  return out;
}

}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block),
                    static_cast<std::uint32_t>(block >> 32)};
  engine_.seed(seq);
}

double Stream::uniform() { return std::generate_canonical<double, 53>(engine_); }

double Stream::normal() { return normal_(engine_); }

double Stream::exponential(double rate) {
  return std::exponential_distribution<double>(rate)(engine_);
}

long Stream::poisson(double mean) {
  return std::poisson_distribution<long>(mean)(engine_);
}

ChainPath sample_chain(const RegimeModel& model, double horizon, Stream& rng) {
  ChainPath path;
  walk_chain(model, horizon, rng, &path.switch_times,
             [&](std::size_t i, double) { path.states.push_back(i); });
  return path;
}

double sample_terminal_log(const RegimeModel& model, double horizon, Stream& rng) {
  const Segments seg = sample_segments(model, horizon, rng);
  return seg.drift + seg.jumps + std::sqrt(seg.variance) * rng.normal();
}

McEstimate mc_expectation(const RegimeModel& model, double horizon,
                          const SimConfig& cfg,
                          const std::function<double(double)>& payoff) {
  check_config(cfg, horizon);
  require_valid(model);
  std::vector<BlockStats> blocks(block_count(cfg));
  const auto n = static_cast<long>(blocks.size());
#pragma omp parallel for schedule(static)
  for (long b = 0; b < n; ++b) {
    blocks[static_cast<std::size_t>(b)] =
        run_block(model, horizon, cfg, payoff, static_cast<std::size_t>(b));
  }
  return finish(blocks);
}

McEstimate mc_expectation_serial(const RegimeModel& model, double horizon,
                                 const SimConfig& cfg,
                                 const std::function<double(double)>& payoff) {
  check_config(cfg, horizon);
  require_valid(model);
  std::vector<BlockStats> blocks(block_count(cfg));
  for (std::size_t b = 0; b < blocks.size(); ++b)
    blocks[b] = run_block(model, horizon, cfg, payoff, b);
  return finish(blocks);
}

std::vector<double> sample_terminal_logs(const RegimeModel& model, double horizon,
                                         const SimConfig& cfg) {
  SimConfig plain = cfg;
  plain.antithetic = false;
  check_config(plain, horizon);
  require_valid(model);
  std::vector<double> out(cfg.paths);
  const auto n = static_cast<long>(block_count(plain));
#pragma omp parallel for schedule(static)
  for (long b = 0; b < n; ++b) {
    const auto block = static_cast<std::size_t>(b);
    Stream rng(cfg.seed, block);
    const std::size_t last = std::min(cfg.paths, (block + 1) * kBlockPaths);
    for (std::size_t k = block * kBlockPaths; k < last; ++k)
      out[k] = sample_terminal_log(model, horizon, rng);
  }
  return out;
}

McEstimate mc_cdf(const RegimeModel& model, double horizon, double spot,
                  double level, const SimConfig& cfg) {
  if (!(spot > 0.0)) throw InputError("spot must be > 0");
  if (!(level > 0.0)) return {};
  const double k = std::log(level / spot);
  return mc_expectation(model, horizon, cfg,
                        [k](double x) { return x < k ? 1.0 : 0.0; });
}

McEstimate mc_put(const RegimeModel& q_model, double horizon, double spot,
                  double strike, const SimConfig& cfg) {
  if (!(spot > 0.0)) throw InputError("spot must be > 0");
  if (!(strike >= 0.0)) throw InputError("strike must be >= 0");
  const double disc = std::exp(-q_model.rate() * horizon);
  McEstimate est = mc_expectation(q_model, horizon, cfg, [&](double x) {
    return std::max(strike - spot * std::exp(x), 0.0);
  });
  est.value *= disc;
  est.std_error *= disc;
  return est;
}

McEstimate mc_beta(const RegimeModel& p_model, const LossSpec& loss,
                   double threshold, const SimConfig& cfg) {
  const MarketSetup& s = loss.setup;
  const double disc = std::exp(-s.rate * s.horizon);
  const double h = loss.fraction;
  const double k = loss.strike;
  return mc_expectation(p_model, s.horizon, cfg, [&](double x) {
    const double st = s.spot * std::exp(x);
    const double l = s.spot + h * loss.premium - disc * (st + h * std::max(k - st, 0.0));
    return l >= threshold ? 1.0 : 0.0;
  });
}

McEstimate mc_quantile(const RegimeModel& model, double horizon, double spot,
                       double p, const SimConfig& cfg) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("quantile level must be in (0,1)");
  std::vector<double> x = sample_terminal_logs(model, horizon, cfg);
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  auto order = [&](double rank) {
    const double r = std::clamp(std::ceil(rank), 1.0, n);
    return spot * std::exp(x[static_cast<std::size_t>(r) - 1]);
  };
  const double spread = std::sqrt(n * p * (1.0 - p));
  McEstimate out;
  out.value = order(n * p);
  out.std_error = 0.5 * (order(n * p + spread) - order(n * p - spread));
  return out;
}

}  // namespace regimevar
