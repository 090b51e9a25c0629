#include "regimevar/errors.hpp"
#include "regimevar/roots.hpp"

#include <doctest.h>

#include <cmath>

using namespace regimevar;

namespace {

RootOptions tight(double width) {
  RootOptions o;
  o.bisect_width = width;
  o.f_tol = 1e-15;
  o.x_tol = 1e-15;
  return o;
}

}  // namespace

TEST_CASE("smooth roots") {
  auto f = [](double x) { return std::cos(x) - x; };
  const double r = find_root(f, 0.0, 1.0, f(0.0), f(1.0), tight(1e-2));
  CHECK(r == doctest::Approx(0.7390851332151607).epsilon(1e-14));

  auto g = [](double x) { return x * x * x - 2.0; };
  CHECK(find_root(g, 0.0, 5.0, g(0.0), g(5.0), tight(1e-3)) ==
        doctest::Approx(std::cbrt(2.0)).epsilon(1e-14));
}

TEST_CASE("steep and flat functions") {
  auto f = [](double x) { return std::tanh(200.0 * (x - 0.3)); };
  CHECK(std::abs(find_root(f, -1.0, 1.0, f(-1.0), f(1.0), tight(1e-4)) - 0.3) < 1e-14);

  auto g = [](double x) { return std::pow(x - 1.0, 3); };
  CHECK(std::abs(find_root(g, 0.0, 3.0, g(0.0), g(3.0), tight(1e-6)) - 1.0) < 1e-5);
}

TEST_CASE("root at a bracket end") {
  auto f = [](double x) { return x - 2.0; };
  CHECK(find_root(f, 2.0, 3.0, 0.0, 1.0, tight(0.1)) == 2.0);
}

TEST_CASE("invalid brackets") {
  auto f = [](double x) { return x * x + 1.0; };
  CHECK_THROWS_AS(find_root(f, -1.0, 1.0, 2.0, 2.0, tight(0.1)), NumericalError);
  CHECK_THROWS_AS(find_root(f, 1.0, -1.0, -1.0, 1.0, tight(0.1)), NumericalError);
  CHECK_THROWS_AS(find_root(f, 0.0, 1.0, std::nan(""), 1.0, tight(0.1)), NumericalError);
}

TEST_CASE("iteration cap") {
  auto f = [](double x) { return x - 0.123456789; };
  RootOptions o = tight(0.0);
  o.max_iter = 5;
  CHECK_THROWS_AS(find_root(f, 0.0, 1.0, f(0.0), f(1.0), o), NumericalError);
}
