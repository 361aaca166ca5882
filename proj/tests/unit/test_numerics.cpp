#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fujitalab/numerics.hpp"

using namespace fujitalab;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("adaptive quadrature hits analytic values") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0) ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
  // integrable endpoint singularity
  CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10) ==
        doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("gauss-legendre rule integrates high-degree polynomials") {
  std::vector<double> x, w;
  gauss_legendre_rule(16, x, w);
  double s = 0.0;
  for (int i = 0; i < 16; ++i) s += w[i] * std::pow(x[i], 28);
  CHECK(s == doctest::Approx(2.0 / 29.0).epsilon(1e-13));
}

TEST_CASE("bisection solves monotone equations") {
  const double r = bisect([](double x) { return x * x * x - 2.0; }, 0.0, 2.0);
  CHECK(r == doctest::Approx(std::cbrt(2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(bisect([](double x) { return x + 3.0; }, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("log_sum_exp is stable far below double range") {
  const double a = -2.0e6, b = -2.0e6 + std::log(2.0);
  CHECK(log_add_exp(a, b) == doctest::Approx(-2.0e6 + std::log(3.0)).epsilon(1e-12));
  CHECK(log_sum_exp({}) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("cubic spline reproduces smooth functions") {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 60; ++i) {
    const double x = i / 60.0 * 3.0;
    xs.push_back(x);
    ys.push_back(std::sin(x));
  }
  CubicSpline s(xs, ys);
  for (double x : {0.1234, 1.5, 2.9})
    CHECK(s(x) == doctest::Approx(std::sin(x)).epsilon(1e-6));
}

TEST_CASE("halton points are deterministic and in the unit cube") {
  auto p1 = halton_point(7, 3);
  auto p2 = halton_point(7, 3);
  CHECK(p1 == p2);
  for (double c : p1) {
    CHECK(c >= 0.0);
    CHECK(c < 1.0);
  }
}

TEST_SUITE_END();
