#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "skiprec/error.hpp"
#include "skiprec/stats.hpp"

using namespace skiprec;

namespace {

double t_pdf(double x, double df) {
  return std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) /
         std::sqrt(df * std::numbers::pi) * std::pow(1 + x * x / df, -(df + 1) / 2);
}

// P(T <= t) as 1/2 + integral_0^t of the density, composite Simpson.
double t_cdf_simpson(double t, double df) {
  const int n = 20000;
  const double h = t / n;
  double s = t_pdf(0, df) + t_pdf(t, df);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * t_pdf(i * h, df);
  return 0.5 + s * h / 3;
}

}  // namespace

TEST_CASE("incomplete beta closed forms") {
  for (double x : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    CHECK(regularized_incomplete_beta(1, 1, x) == doctest::Approx(x).epsilon(1e-14));
    CHECK(regularized_incomplete_beta(2, 1, x) == doctest::Approx(x * x).epsilon(1e-14));
    CHECK(regularized_incomplete_beta(1, 3, x) ==
          doctest::Approx(1 - std::pow(1 - x, 3)).epsilon(1e-14));
  }
  CHECK(regularized_incomplete_beta(0.5, 0.5, 0.25) ==
        doctest::Approx(2 / std::numbers::pi * std::asin(0.5)).epsilon(1e-13));
}

TEST_CASE("t distribution matches numerical integration") {
  for (double df : {1.0, 2.0, 4.5, 9.0, 30.0})
    for (double t : {-4.0, -1.3, 0.0, 0.7, 2.2, 6.0}) {
      CAPTURE(df);
      CAPTURE(t);
      CHECK(std::abs(student_t_cdf(t, df) - t_cdf_simpson(t, df)) <= 1e-9);
    }
  CHECK(student_t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("paired t-test reference case") {
  // n = 10, mean difference 1, sample sd 1.
  const double a = std::sqrt(0.9);
  std::vector<double> x(10), y(10, 0.0);
  for (int i = 0; i < 10; ++i) x[i] = 1.0 + (i % 2 ? a : -a);
  const auto r = paired_t_test(x, y);
  CHECK(r.df == 9);
  CHECK(r.t == doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));
  CHECK(std::abs(r.p - 0.011507985165943651) <= 1e-9);
  CHECK_FALSE(r.degenerate);
  const auto flipped = paired_t_test(y, x);
  CHECK(flipped.t == doctest::Approx(-r.t));
  CHECK(flipped.p == doctest::Approx(r.p));
}

TEST_CASE("degenerate and invalid inputs") {
  const std::vector<double> a{1, 2, 3}, b{0, 1, 2}, c{1, 2, 3};
  const auto shift = paired_t_test(a, b);
  CHECK(shift.degenerate);
  CHECK(shift.p == 0.0);
  const auto same = paired_t_test(a, c);
  CHECK(same.degenerate);
  CHECK(same.p == 1.0);
  CHECK_THROWS_AS(paired_t_test(std::vector<double>{1}, std::vector<double>{2}), UsageError);
  CHECK_THROWS_AS(paired_t_test(a, std::vector<double>{1, 2}), UsageError);
}

TEST_CASE("alternating differences have zero mean") {
  const std::vector<double> d{1, -1, 1, -1, 1, -1}, zero(6, 0.0);
  const auto r = paired_t_test(d, zero);
  CHECK(r.t == 0.0);
  CHECK(r.p == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.df == 5);
}
