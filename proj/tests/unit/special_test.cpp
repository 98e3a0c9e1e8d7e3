#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rankos/special.hpp"

using namespace rankos;

namespace {

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * special::pi);
}

// quadrature oracle for the standard normal upper tail
double normal_tail_oracle(double z) {
  return special::integrate([](double u) { return normal_pdf(u); }, z, z + 14.0,
                            1e-13);
}

}  // namespace

TEST_CASE("integrate: polynomial and trig references") {
  CHECK(special::integrate([](double x) { return x * x; }, 0, 1, 1e-12) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(special::integrate([](double x) { return std::sin(x); }, 0, special::pi,
                           1e-12) == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(special::integrate_real_line([](double x) { return normal_pdf(x); },
                                     1e-11) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("chi2_tail: closed form at 2 degrees of freedom") {
  for (double x : {0.1, 0.5, 1.0, 3.7, 10.0, 40.0})
    CHECK(special::chi2_tail(2, x) ==
          doctest::Approx(std::exp(-0.5 * x)).epsilon(1e-14));
}

TEST_CASE("chi2_tail: trivial and error cases") {
  CHECK(special::chi2_tail(1, 0.0) == 1.0);
  CHECK(special::chi2_tail(7, 0.0) == 1.0);
  CHECK_THROWS_AS(special::chi2_tail(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(special::chi2_tail(3, -1.0), std::invalid_argument);
}

TEST_CASE("chi2_tail: quadrature oracle at 1 df (normal square)") {
  // P(chi^2_1 > x) = 2 P(Z > sqrt(x))
  for (double x : {0.5, 1.0, 3.841459, 6.0}) {
    double oracle = 2.0 * normal_tail_oracle(std::sqrt(x));
    CHECK(special::chi2_tail(1, x) == doctest::Approx(oracle).epsilon(1e-10));
  }
  CHECK(special::chi2_tail(1, 3.841459) == doctest::Approx(0.05).epsilon(2e-4));
}

TEST_CASE("chi2_tail: quadrature oracle at several df") {
  for (unsigned df : {3u, 5u, 10u, 40u}) {
    for (double t : {0.7, 1.0, 2.0, 4.0}) {
      double x = df * t;
      double oracle = special::integrate(
          [df](double u) {
            double a = 0.5 * df;
            return std::exp((a - 1.0) * std::log(u) - 0.5 * u - a * std::log(2.0) -
                            std::lgamma(a));
          },
          x, x + 60.0 + 8.0 * df, 1e-14);
      CHECK(special::chi2_tail(df, x) ==
            doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("chi2_tail: saddlepoint agrees with the exact routine at large df") {
  for (double df : {300.0, 450.0, 512.0}) {
    for (double t : {1.1, 1.3, 2.0, 3.5}) {
      double exact = special::chi2_tail(static_cast<unsigned>(df), df * t);
      double sp = special::chi2_tail_saddlepoint(df, df * t);
      CHECK(sp == doctest::Approx(exact).epsilon(2e-4));
    }
  }
}

TEST_CASE("incomplete_beta: symmetry, quadrature oracle, t quantiles") {
  // I_x(a,b) = 1 - I_{1-x}(b,a)
  for (double a : {0.5, 2.0, 7.5})
    for (double b : {0.5, 1.0, 4.0})
      for (double x : {0.1, 0.37, 0.8})
        CHECK(special::incomplete_beta(a, b, x) ==
              doctest::Approx(1.0 - special::incomplete_beta(b, a, 1.0 - x))
                  .epsilon(1e-13));

  // quadrature oracle over the density
  for (double x : {0.2, 0.6}) {
    double a = 2.5, b = 1.5;
    double oracle = special::integrate(
                        [a, b](double u) {
                          return std::exp((a - 1.0) * std::log(u) +
                                          (b - 1.0) * std::log1p(-u));
                        },
                        0.0, x, 1e-13) *
                    std::exp(std::lgamma(a + b) - std::lgamma(a) -
                             std::lgamma(b));
    CHECK(special::incomplete_beta(a, b, x) ==
          doctest::Approx(oracle).epsilon(1e-10));
  }

  CHECK(special::incomplete_beta(1.0, 1.0, 0.42) ==
        doctest::Approx(0.42).epsilon(1e-14));
  CHECK_THROWS_AS(special::incomplete_beta(0.0, 1.0, 0.5),
                  std::invalid_argument);

  // t distribution: Cauchy closed form and a classical quantile
  for (double x : {-2.0, -0.3, 0.0, 1.2, 5.0})
    CHECK(special::student_t_cdf(x, 1.0) ==
          doctest::Approx(0.5 + std::atan(x) / special::pi).epsilon(1e-13));
  CHECK(special::student_t_cdf(2.0150483727, 5.0) ==
        doctest::Approx(0.95).epsilon(1e-9));
}

TEST_CASE("normal_cdf and normal_quantile") {
  CHECK(special::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  for (double z : {-3.0, -1.0, -0.2, 0.7, 2.5})
    CHECK(special::normal_cdf(z) ==
          doctest::Approx(1.0 - normal_tail_oracle(z)).epsilon(1e-11));

  // round trips across the score range used by normal_scores
  for (int k = 1; k <= 1000; k += 37) {
    double u = k / 1001.0;
    CHECK(special::normal_cdf(special::normal_quantile(u)) ==
          doctest::Approx(u).epsilon(1e-13));
  }
  CHECK_THROWS_AS(special::normal_quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(special::normal_quantile(1.0), std::invalid_argument);
}
