#include "regimevar/errors.hpp"
#include "regimevar/model.hpp"
#include "regimevar/model_io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace regimevar;

namespace {

RegimeModel table1() {
  RegimeParams a{0.0, 0.3, 2.0, {0.0, 0.08}};
  RegimeParams b{0.0, 0.05, 0.8, {0.0, 0.15}};
  return two_state_model(a, b, 1.0, 0.2);
}

bool mentions(const std::vector<std::string>& v, const std::string& what) {
  for (const auto& s : v)
    if (s.find(what) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("kappa closed form") {
  CHECK(kappa({0.0, 0.0}) == 0.0);
  CHECK(kappa({0.0, 0.15}) == doctest::Approx(0.0113135192236113).epsilon(1e-14));
  CHECK(kappa({-0.3, 0.15}) == doctest::Approx(-0.250800518137398).epsilon(1e-14));
}

TEST_CASE("kappa agrees with a Monte Carlo average of e^Y - 1") {
  std::mt19937_64 rng(7);
  for (JumpLaw j : {JumpLaw{0.0, 0.15}, JumpLaw{-0.3, 0.15}}) {
    std::normal_distribution<double> y(j.mean, j.stdev);
    const int n = 1'000'000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = std::expm1(y(rng));
      s += v;
      s2 += v * v;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::abs(mean - kappa(j)) < 3.0 * se);
  }
}

TEST_CASE("validate reports each broken invariant") {
  CHECK(validate(table1()).empty());

  RegimeModel m = table1();
  m.generator(0, 1) = 1.1;
  auto v = validate(m);
  CHECK(v.size() == 1);
  CHECK(mentions(v, "generator row 1"));

  m = table1();
  m.regimes[1].sigma = 0.0;
  v = validate(m);
  CHECK(v.size() == 1);
  CHECK(mentions(v, "sigma regime 2"));

  m = table1();
  m.generator(1, 0) = -0.2;
  m.generator(1, 1) = 0.2;
  CHECK(mentions(validate(m), "generator entry (2,1)"));

  m = table1();
  m.regimes[0].lambda = -1.0;
  m.regimes[0].jump.stdev = -0.1;
  m.initial_regime = 2;
  v = validate(m);
  CHECK(v.size() == 3);
  CHECK(mentions(v, "lambda regime 1"));
  CHECK(mentions(v, "jump.b regime 1"));
  CHECK(mentions(v, "initial_state"));
  CHECK_THROWS_AS(require_valid(m), InputError);

  m = table1();
  m.generator = Eigen::MatrixXd::Zero(3, 3);
  CHECK(mentions(validate(m), "generator: expected 2x2"));
}

TEST_CASE("market setup validation") {
  MarketSetup s;
  CHECK(validate(s).empty());
  s.alpha = 1.0;
  s.horizon = 0.0;
  s.budget = -1.0;
  s.spot = -5.0;
  CHECK(validate(s).size() == 4);
  CHECK_THROWS_AS(require_valid(s), InputError);
}

TEST_CASE("rate and drift by measure") {
  RegimeModel p = gbm_model(0.08, 0.2);
  CHECK_FALSE(p.risk_neutral());
  CHECK_THROWS_AS(p.rate(), InputError);
  CHECK(p.log_drift(0) == doctest::Approx(0.08 - 0.02));

  RegimeModel q = merton_model(0.3, 0.2, 1.5, {-0.1, 0.1}, RiskNeutral{0.04});
  CHECK(q.rate() == 0.04);
  CHECK(q.log_drift(0) ==
        doctest::Approx(0.04 - 0.02 - 1.5 * kappa({-0.1, 0.1})).epsilon(1e-15));
}

TEST_CASE("measure change: already risk-neutral GBM") {
  RegimeModel p = gbm_model(0.05, 0.2);
  MeasureChange mc = apply_measure_change(p, MeasureChangeSpec::identity(p.regimes), 0.05);
  CHECK(mc.model.risk_neutral());
  CHECK(mc.model.rate() == 0.05);
  CHECK(mc.model.regimes[0].sigma == 0.2);
  CHECK(mc.model.generator(0, 0) == 0.0);
  CHECK(mc.girsanov_shift[0] == doctest::Approx(0.0));
}

TEST_CASE("measure change: identity on the two-state jump model") {
  RegimeModel p = table1();
  const double r = 0.005;
  MeasureChange mc = apply_measure_change(p, MeasureChangeSpec::identity(p.regimes), r);
  CHECK((mc.model.generator - p.generator).norm() == 0.0);
  for (std::size_t i = 0; i < 2; ++i) {
    const RegimeParams& x = p.regimes[i];
    CHECK(mc.model.log_drift(i) ==
          doctest::Approx(r - 0.5 * x.sigma * x.sigma - x.lambda * kappa(x.jump))
              .epsilon(1e-15));
  }
}

TEST_CASE("measure change: generator scaling rebalances the diagonal") {
  RegimeModel p = table1();
  MeasureChangeSpec spec = MeasureChangeSpec::identity(p.regimes);
  spec.phi(0, 1) = 2.0;
  spec.phi(1, 0) = 0.5;
  spec.psi = {1.5, 0.5};
  spec.q_jump = {{-0.05, 0.1}, {-0.2, 0.2}};
  const RegimeModel q = apply_measure_change(p, spec, 0.01).model;
  CHECK(q.generator(0, 0) == doctest::Approx(-2.0));
  CHECK(q.generator(0, 1) == doctest::Approx(2.0));
  CHECK(q.generator(1, 0) == doctest::Approx(0.1));
  CHECK(q.generator(1, 1) == doctest::Approx(-0.1));
  CHECK(q.regimes[0].lambda == doctest::Approx(3.0));
  CHECK(q.regimes[1].lambda == doctest::Approx(0.4));
  CHECK(q.regimes[1].jump.mean == -0.2);
}

TEST_CASE("measure change keeps zero row sums on random specs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + trial % 4;
    RegimeModel p;
    p.generator = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      double off = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        p.generator(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = u(rng);
        off += p.generator(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
      p.generator(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = -off;
      p.regimes.push_back({0.05, 0.2, u(rng), {0.0, 0.1}});
    }
    MeasureChangeSpec spec = MeasureChangeSpec::identity(p.regimes);
    for (std::size_t i = 0; i < m; ++i) {
      spec.psi[i] = u(rng);
      for (std::size_t j = 0; j < m; ++j)
        spec.phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = u(rng);
    }
    const RegimeModel q = apply_measure_change(p, spec, 0.02).model;
    for (Eigen::Index i = 0; i < q.generator.rows(); ++i)
      CHECK(std::abs(q.generator.row(i).sum()) < 1e-14);
  }
}

TEST_CASE("measure change input errors") {
  RegimeModel p = table1();
  MeasureChangeSpec spec = MeasureChangeSpec::identity(p.regimes);
  spec.psi.pop_back();
  CHECK_THROWS_AS(apply_measure_change(p, spec, 0.01), InputError);

  RegimeModel q = table1();
  q.measure = RiskNeutral{0.01};
  CHECK_THROWS_AS(apply_measure_change(q, MeasureChangeSpec::identity(q.regimes), 0.01),
                  InputError);

  spec = MeasureChangeSpec::identity(p.regimes);
  spec.psi[0] = 0.0;
  CHECK_THROWS_AS(apply_measure_change(p, spec, 0.01), InputError);
}

TEST_CASE("market price of risk") {
  RegimeModel riskless = gbm_model(0.05, 0.2);
  CHECK(market_price_of_risk(riskless, MeasureChangeSpec::identity(riskless.regimes), 0.05, 0) ==
        doctest::Approx(0.0));

  RegimeModel jd = merton_model(0.1, 0.2, 1.0, {0.0, 0.1});
  CHECK(market_price_of_risk(jd, MeasureChangeSpec::identity(jd.regimes), 0.05, 0) ==
        doctest::Approx(0.055012520859401).epsilon(1e-13));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    RegimeModel p = merton_model(0.3 * u(rng) - 0.1, 0.05 + 0.4 * u(rng), 3.0 * u(rng),
                                 {0.4 * u(rng) - 0.3, 0.2 * u(rng)});
    MeasureChangeSpec spec = MeasureChangeSpec::identity(p.regimes);
    spec.psi[0] = 0.2 + 2.0 * u(rng);
    spec.q_jump[0] = {0.4 * u(rng) - 0.3, 0.2 * u(rng)};
    const double r = 0.1 * u(rng);
    CHECK(std::abs(market_price_of_risk(p, spec, r, 0) -
                   market_price_of_risk_decomposed(p, spec, r, 0)) < 1e-12);
  }
}

TEST_CASE("model JSON round trip") {
  RegimeModel m = table1();
  m.initial_regime = 1;
  m.measure = RiskNeutral{0.005};
  const RegimeModel back = model_from_json(model_to_json(m));
  CHECK((back.generator - m.generator).norm() == 0.0);
  CHECK(back.initial_regime == 1);
  CHECK(back.rate() == 0.005);
  CHECK(back.regimes[1].jump.stdev == 0.15);
  CHECK(model_to_json(m)["initial_state"] == 2);
}

TEST_CASE("model JSON errors carry the field path") {
  nlohmann::json doc = model_to_json(table1());
  doc["regimes"][1]["sigma"] = "high";
  try {
    model_from_json(doc);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()) == "$.regimes[1].sigma: expected a number");
  }

  doc = model_to_json(table1());
  doc.erase("initial_state");
  CHECK_THROWS_WITH_AS(model_from_json(doc), "$.initial_state: missing field", InputError);

  doc = model_to_json(table1());
  doc["initial_state"] = 3;
  CHECK_THROWS_AS(model_from_json(doc), InputError);

  doc = model_to_json(table1());
  doc["measure"] = "R";
  CHECK_THROWS_AS(model_from_json(doc), InputError);

  doc = model_to_json(table1());
  doc["generator"][0][0] = -2.0;
  CHECK_THROWS_AS(model_from_json(doc), InputError);
}

TEST_CASE("load_model reports malformed files as input errors") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto bad = dir / "regimevar_bad_model.json";
  std::ofstream(bad) << "{\"states\": 1,";
  CHECK_THROWS_AS(load_model(bad), InputError);
  CHECK_THROWS_AS(load_model(dir / "regimevar_missing_model.json"), InputError);

  const auto good = dir / "regimevar_good_model.json";
  std::ofstream(good) << model_to_json(table1()).dump();
  CHECK(load_model(good).states() == 2);
  std::filesystem::remove(bad);
  std::filesystem::remove(good);
}
