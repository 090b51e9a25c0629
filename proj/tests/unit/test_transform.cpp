#include "regimevar/errors.hpp"
#include "regimevar/transform.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace regimevar;

namespace {

RegimeModel table1_q(double r = 0.005) {
  RegimeParams a{0.0, 0.3, 2.0, {0.0, 0.08}};
  RegimeParams b{0.0, 0.05, 0.8, {0.0, 0.15}};
  return two_state_model(a, b, 1.0, 0.2, 0, RiskNeutral{r});
}

QuadratureSpec with_nu(QuadratureSpec q, double nu) {
  q.nu = nu;
  return q;
}

}  // namespace

TEST_CASE("Black-Scholes at the money") {
  const RegimeModel q = gbm_model(0.0, 0.2, RiskNeutral{0.05});
  CHECK(put_price(100.0, 1.0, q, 100.0) == doctest::Approx(5.573526022257).epsilon(1e-11));
  CHECK(call_price(100.0, 1.0, q, 100.0) == doctest::Approx(10.450583572186).epsilon(1e-11));
  CHECK(put_price(100.0, 1.0, q, 100.0) ==
        doctest::Approx(oracle::bs_put(0.2, 100.0, 1.0, 100.0, 0.05)).epsilon(1e-10));
}

TEST_CASE("Black-Scholes limit on random configurations") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double sigma = 0.08 + 0.5 * u(rng);
    const double t = 0.1 + 3.0 * u(rng);
    const double k = 100.0 * std::exp(0.6 * (u(rng) - 0.5));
    const double r = 0.08 * u(rng);
    const RegimeModel q = gbm_model(0.0, sigma, RiskNeutral{r});
    INFO("sigma " << sigma << " T " << t << " K " << k);
    const double ref = oracle::bs_put(sigma, k, t, 100.0, r);
    CHECK(std::abs(put_price(k, t, q, 100.0) - ref) < 1e-8 * ref);
    const double s = sigma * std::sqrt(t);
    const double m = (r - 0.5 * sigma * sigma) * t;
    CHECK(std::abs(tail_prob(k, t, q, 100.0) - oracle::lognormal_cdf(k, m, s, 100.0)) < 1e-10);
  }
}

TEST_CASE("price and probability limits") {
  const RegimeModel q = gbm_model(0.0, 0.2, RiskNeutral{0.05});
  CHECK(put_price(1e-6 * 100.0, 1.0, q, 100.0) < 1e-10);
  CHECK(std::abs(call_price(1e-6 * 100.0, 1.0, q, 100.0) - (100.0 - 1e-4 * std::exp(-0.05))) < 1e-8);
  CHECK(std::abs(tail_prob(1e6 * 100.0, 1.0, q, 100.0) - 1.0) < 1e-8);
  CHECK(tail_prob(1e-6 * 100.0, 1.0, q, 100.0) < 1e-12);

  const RegimeModel p = gbm_model(0.07, 0.3);
  const double median = 100.0 * std::exp((0.07 - 0.045) * 2.0);
  CHECK(std::abs(tail_prob(median, 2.0, p, 100.0) - 0.5) < 1e-10);
}

TEST_CASE("strike derivative") {
  const RegimeModel q = gbm_model(0.0, 0.2, RiskNeutral{0.05});
  CHECK(put_strike_derivative(1e-6 * 100.0, 1.0, q, 100.0) < 1e-12);
  CHECK(std::abs(put_strike_derivative(1e6 * 100.0, 1.0, q, 100.0) - std::exp(-0.05)) < 1e-8);
  const double d2 = (0.05 - 0.02) / 0.2;
  CHECK(std::abs(put_strike_derivative(100.0, 1.0, q, 100.0) -
                 std::exp(-0.05) * oracle::norm_cdf(-d2)) < 1e-10);

  const RegimeModel m = table1_q();
  for (int i = 0; i < 10; ++i) {
    const double k = 40.0 + 15.0 * i;
    const double h = 1e-3 * k;
    auto p = [&](double x) { return put_price(x, 1.0, m, 100.0); };
    const double fd = (8.0 * (p(k + h) - p(k - h)) - (p(k + 2 * h) - p(k - 2 * h))) / (12 * h);
    const double d = put_strike_derivative(k, 1.0, m, 100.0);
    CHECK(std::abs(fd - d) < 1e-5 * d);
  }
}

TEST_CASE("Merton series") {
  const RegimeModel q = merton_model(0.0, 0.1, 1.0, {0.0, 0.1}, RiskNeutral{0.05});
  CHECK(put_price(100.0, 1.0, q, 100.0) == doctest::Approx(3.259691824367).epsilon(1e-11));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const double sigma = 0.1 + 0.3 * u(rng);
    const double lambda = 0.2 + 2.0 * u(rng);
    const double a = -0.25 + 0.3 * u(rng);
    const double b = 0.05 + 0.2 * u(rng);
    const double k = 70.0 + 60.0 * u(rng);
    const double t = 0.25 + 2.0 * u(rng);
    const RegimeModel jd = merton_model(0.0, sigma, lambda, {a, b}, RiskNeutral{0.03});
    const double ref = oracle::merton_put(sigma, lambda, a, b, k, t, 100.0, 0.03);
    CHECK(std::abs(put_price(k, t, jd, 100.0) - ref) < 1e-6 * ref);
  }
}

TEST_CASE("contour invariance") {
  const RegimeModel m = table1_q();
  for (double k : {50.0, 95.0, 140.0}) {
    const double p1 = put_price(k, 1.0, m, 100.0, with_nu(QuadratureSpec::for_prices(), 1.25));
    const double p2 = put_price(k, 1.0, m, 100.0, with_nu(QuadratureSpec::for_prices(), 1.5));
    const double p3 = put_price(k, 1.0, m, 100.0, with_nu(QuadratureSpec::for_prices(), 2.0));
    CHECK(std::abs(p1 - p2) < 1e-7);
    CHECK(std::abs(p2 - p3) < 1e-7);
    const double t1 = tail_prob(k, 1.0, m, 100.0, with_nu(QuadratureSpec{}, 0.5));
    const double t2 = tail_prob(k, 1.0, m, 100.0, with_nu(QuadratureSpec{}, 1.0));
    const double t3 = tail_prob(k, 1.0, m, 100.0, with_nu(QuadratureSpec{}, 1.5));
    CHECK(std::abs(t1 - t2) < 1e-7);
    CHECK(std::abs(t2 - t3) < 1e-7);
  }
}

TEST_CASE("monotone CDF, monotone convex put, price bounds") {
  const RegimeModel m = table1_q();
  const double disc = std::exp(-0.005);
  double prev_p = -1.0, prev_put = -1.0;
  std::vector<double> puts;
  for (int i = 0; i < 50; ++i) {
    const double k = 20.0 + 4.0 * i;
    const double p = tail_prob(k, 1.0, m, 100.0);
    const double put = put_price(k, 1.0, m, 100.0);
    const double call = call_price(k, 1.0, m, 100.0);
    CHECK(p >= prev_p);
    CHECK(put >= prev_put);
    CHECK(put >= 0.0);
    CHECK(put <= disc * k);
    CHECK(call >= std::max(100.0 - disc * k, 0.0) - 1e-12);
    CHECK(call <= 100.0);
    CHECK(std::abs(call - put - 100.0 + disc * k) < 1e-12);
    prev_p = p;
    prev_put = put;
    puts.push_back(put);
  }
  for (std::size_t i = 1; i + 1 < puts.size(); ++i)
    CHECK(puts[i - 1] - 2.0 * puts[i] + puts[i + 1] >= -1e-8);
}

TEST_CASE("mirrored contours agree with the direct side near the switch") {
  const RegimeModel m = table1_q();
  // Forward is 100 e^{0.005}; strikes straddle it.
  const double below = put_price(100.4, 1.0, m, 100.0);
  const double above = put_price(100.6, 1.0, m, 100.0);
  const double slope = put_strike_derivative(100.5, 1.0, m, 100.0);
  CHECK(std::abs((above - below) / 0.2 - slope) < 1e-4 * slope);
}

TEST_CASE("input errors") {
  const RegimeModel q = gbm_model(0.0, 0.2, RiskNeutral{0.05});
  CHECK_THROWS_AS(put_price(100.0, 1.0, q, 100.0, with_nu(QuadratureSpec{}, 1.0)), InputError);
  CHECK_THROWS_AS(tail_prob(100.0, 1.0, q, 100.0, with_nu(QuadratureSpec{}, 0.0)), InputError);
  CHECK_THROWS_AS(put_price(-1.0, 1.0, q, 100.0), InputError);
  CHECK_THROWS_AS(put_price(100.0, 0.0, q, 100.0), InputError);
  CHECK_THROWS_AS(put_price(100.0, 1.0, gbm_model(0.05, 0.2), 100.0), InputError);
  QuadratureSpec bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(tail_prob(100.0, 1.0, q, 100.0, bad), InputError);
}

TEST_CASE("contour errors are numerical errors") {
  const ContourError e("x");
  CHECK(e.kind() == ErrorKind::Numerical);
}
