#include "regimevar/errors.hpp"
#include "regimevar/misspec.hpp"
#include "regimevar/transform.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace regimevar;

TEST_CASE("Black-Scholes helpers") {
  CHECK(bs_put(0.2, 100.0, 1.0, 100.0, 0.05) ==
        doctest::Approx(oracle::bs_put(0.2, 100.0, 1.0, 100.0, 0.05)).epsilon(1e-13));
  CHECK(bs_put(0.0, 110.0, 1.0, 100.0, 0.05) == doctest::Approx(110.0 * std::exp(-0.05) - 100.0));
  CHECK(bs_put(0.0, 90.0, 1.0, 100.0, 0.05) == 0.0);
  CHECK(std::abs(bs_put(1e-9, 110.0, 1.0, 100.0, 0.05) - bs_put(0.0, 110.0, 1.0, 100.0, 0.05)) <
        1e-10);
  for (double k : {60.0, 100.0, 150.0}) {
    const double parity = bs_call(0.3, k, 2.0, 100.0, 0.02) - bs_put(0.3, k, 2.0, 100.0, 0.02);
    CHECK(std::abs(parity - (100.0 - k * std::exp(-0.04))) < 1e-11);
    const RegimeModel q = gbm_model(0.0, 0.3, RiskNeutral{0.02});
    CHECK(std::abs(bs_put(0.3, k, 2.0, 100.0, 0.02) - put_price(k, 2.0, q, 100.0)) <
          1e-8 * std::max(1.0, bs_put(0.3, k, 2.0, 100.0, 0.02)));
  }
}

TEST_CASE("synthetic grid") {
  const RegimeModel q = gbm_model(0.0, 0.25, RiskNeutral{0.03});
  const GridSpec spec;
  const CalibrationGrid g = synth_grid(q, 100.0, spec);
  REQUIRE(g.prices.rows() == 3);
  REQUIRE(g.prices.cols() == 5);
  CHECK(g.strikes[0] == doctest::Approx(80.0));
  for (Eigen::Index i = 0; i < g.prices.rows(); ++i)
    for (Eigen::Index j = 0; j < g.prices.cols(); ++j) {
      const double ref = oracle::bs_put(0.25, g.strikes[j], g.maturities[i], 100.0, 0.03);
      CHECK(std::abs(g.prices(i, j) - ref) < 1e-8 * ref);
      if (j > 0) CHECK(g.prices(i, j) > g.prices(i, j - 1));
    }

  const CalibrationGrid s = synth_grid_serial(q, 100.0, spec);
  CHECK(s.prices == g.prices);

  const auto t1 = fixture::table1();
  const CalibrationGrid tg = synth_grid(t1.q, 100.0, spec);
  CHECK((tg.prices.array() > 0.0).all());
  CHECK_NOTHROW(require_valid(tg, 100.0, fixture::kTableRate));

  GridSpec calls = spec;
  calls.instrument = Instrument::Call;
  const CalibrationGrid cg = synth_grid(q, 100.0, calls);
  CHECK(std::abs(cg.prices(1, 2) - oracle::bs_call(0.25, 100.0, 1.0, 100.0, 0.03)) < 1e-8);
}

TEST_CASE("calibration recovers a GBM volatility") {
  for (double sigma : {0.05, 0.25, 0.6}) {
    const RegimeModel q = gbm_model(0.0, sigma, RiskNeutral{0.03});
    const CalibrationGrid g = synth_grid(q, 100.0, GridSpec{});
    CHECK(std::abs(calibrate_gbm(g, 100.0, 0.03) - sigma) < 1e-6);
  }
  // Prices scale with S0 and K together.
  const auto t1 = fixture::table1();
  const CalibrationGrid a = synth_grid(t1.q, 100.0, GridSpec{});
  const CalibrationGrid b = synth_grid(t1.q, 1000.0, GridSpec{});
  CHECK(std::abs(calibrate_gbm(a, 100.0, 0.005) - calibrate_gbm(b, 1000.0, 0.005)) < 1e-6);
}

TEST_CASE("grid validation") {
  const RegimeModel q = gbm_model(0.0, 0.25, RiskNeutral{0.03});
  CalibrationGrid g = synth_grid(q, 100.0, GridSpec{});
  CalibrationGrid bad = g;
  bad.prices(0, 0) = -1.0;
  CHECK_THROWS_AS(require_valid(bad, 100.0, 0.03), InputError);
  bad = g;
  bad.prices(2, 4) = 500.0;
  CHECK_THROWS_AS(calibrate_gbm(bad, 100.0, 0.03), InputError);
  bad = g;
  bad.prices.resize(2, 5);
  CHECK_THROWS_AS(require_valid(bad, 100.0, 0.03), InputError);
  GridSpec empty;
  empty.strike_ratios.clear();
  CHECK_THROWS_AS(synth_grid(q, 100.0, empty), InputError);
  GridSpec neg;
  neg.maturities = {-1.0};
  CHECK_THROWS_AS(synth_grid(q, 100.0, neg), InputError);
}

TEST_CASE("a GBM world is its own calibration") {
  const RegimeModel p = gbm_model(0.05, 0.2);
  const RegimeModel q = gbm_model(0.0, 0.2, RiskNeutral{0.05});
  MarketSetup s;
  s.rate = 0.05;
  s.budget = 0.1;  // interior: Put(K*) is about 0.3
  const MisspecReport r = run_misspec(p, q, s);
  CHECK(std::abs(r.sigma_hat - 0.2) < 1e-6);
  CHECK(r.mu_hat == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(std::abs(r.gbm_strategy.strike - r.true_strategy.strike) < 1e-4);
  CHECK(std::abs(r.gbm_strategy.hedged_var - r.true_strategy.hedged_var) < 1e-4);
  CHECK(std::abs(r.beta - 0.01) < 1e-6);
}

TEST_CASE("regime-switching misspecification") {
  const auto t1 = fixture::table1();
  const MarketSetup s = fixture::table_setup(0.5, 0.1);
  MisspecOptions opt;
  const MisspecReport r = run_misspec(t1.p, t1.q, s, opt);
  CHECK(r.beta > 0.0);
  CHECK(r.beta < 1.0);
  CHECK(r.sigma_hat > 0.05);
  CHECK(r.sigma_hat < 0.3);
  CHECK(r.mu_hat == doctest::Approx(fixture::kTableRate).epsilon(1e-8));
  CHECK(r.premium_paid ==
        doctest::Approx(put_price(r.gbm_strategy.strike, 0.5, t1.q, 100.0)).epsilon(1e-12));

  opt.premium = PremiumSource::Gbm;
  const MisspecReport g = run_misspec(t1.p, t1.q, s, opt);
  CHECK(g.premium_paid == r.gbm_strategy.premium);
  CHECK(g.sigma_hat == r.sigma_hat);

  SimConfig cfg;
  cfg.paths = 200'000;
  cfg.seed = 8;
  opt.premium = PremiumSource::TrueModel;
  opt.simulation = cfg;
  const MisspecReport m = run_misspec(t1.p, t1.q, s, opt);
  REQUIRE(m.beta_mc.has_value());
  CHECK(std::abs(m.beta_mc->value - m.beta) < 4.0 * m.beta_mc->std_error);
}
