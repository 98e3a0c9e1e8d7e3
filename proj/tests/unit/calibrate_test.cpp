#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "rankos/calibrate.hpp"
#include "rankos/errors.hpp"
#include "rankos/rng.hpp"

using namespace rankos;

TEST_CASE("exact_null: n=2 is a point mass; table scale is standardized") {
  NullDistribution d = exact_null(2, {Method::os_rank, 0});
  CHECK(d.total == 2);
  REQUIRE(d.values.size() == 1);
  CHECK(d.tail_counts[0] == 2);
  // statistic 2/3, times the score-scale factor (3/2)^2
  CHECK(d.values[0] == doctest::Approx(1.5).epsilon(1e-14));
  TestOutcome o;
  o.method = Method::os_rank;
  o.statistic = 2.0 / 3.0;
  CHECK(p_value(o, d) == 1.0);
}

TEST_CASE("exact_null: published small-sample tails at n=5 and n=8") {
  NullDistribution d5 = exact_null(5, {Method::os_rank, 0});
  CHECK(d5.total == 120);
  CHECK(d5.tail_probability(3.221) == doctest::Approx(0.1000).epsilon(1e-12));
  CHECK(d5.tail_probability(4.179) ==
        doctest::Approx(2.0 / 120.0).epsilon(1e-12));
  CHECK(d5.tail_probability(6.745) == 0.0);

  NullDistribution d8 = exact_null(8, {Method::os_rank, 0});
  CHECK(d8.total == 40320);
  CHECK(std::fabs(d8.tail_probability(6.745) - 0.0022) < 5e-5);
}

TEST_CASE("exact_null: capacity errors") {
  CHECK_THROWS_AS(exact_null(11, {Method::os_rank, 0}), CapacityError);
  CHECK_THROWS_AS(exact_null(12, {Method::os_rank, 0}, 12), CapacityError);
  CHECK_NOTHROW(exact_null(5, {Method::neyman_rank_mallows, 0}));
  CHECK_THROWS_AS(exact_null(8, {Method::os_raw, 0}), std::invalid_argument);
}

TEST_CASE("monte_carlo_null: deterministic, thread-count independent") {
  StatisticId id{Method::os_rank, 0};
  NullDistribution a = monte_carlo_null(9, id, 4000, 77);
  NullDistribution b = monte_carlo_null(9, id, 4000, 77);
  NullDistribution c = monte_carlo_null(9, id, 4000, 77, 2);
  CHECK(a.values == b.values);
  CHECK(a.tail_counts == b.tail_counts);
  CHECK(a.values == c.values);
  CHECK(a.tail_counts == c.tail_counts);
  NullDistribution other = monte_carlo_null(9, id, 4000, 78);
  CHECK(a.values != other.values);
}

TEST_CASE("monte_carlo_null agrees with exact_null at n=8") {
  StatisticId id{Method::os_rank, 0};
  NullDistribution ex = exact_null(8, id);
  NullDistribution mc = monte_carlo_null(8, id, 1000000, 2024, 2);
  for (double thr : {3.221, 4.179, 6.745, 10.850}) {
    double p = ex.tail_probability(thr);
    double se = std::sqrt(p * (1.0 - p) / 1000000.0);
    CHECK(std::fabs(mc.tail_probability(thr) - p) <= 3.0 * se + 1e-9);
  }
}

TEST_CASE("exact tails stay conservative below the 0.05 level") {
  const double nominal[3] = {0.05, 0.01, 0.001};
  const double thr[3] = {4.179, 6.745, 10.850};
  double first[3] = {0, 0, 0}, last[3] = {0, 0, 0};
  for (std::size_t n = 5; n <= 10; ++n) {
    NullDistribution d = exact_null(n, {Method::os_rank, 0});
    for (int k = 0; k < 3; ++k) {
      double tail = d.tail_probability(thr[k]);
      CHECK(tail <= nominal[k] + 1e-12);
      if (n == 5) first[k] = tail;
      if (n == 10) last[k] = tail;
    }
  }
  // broad approach toward nominal with n (endpoint trend, not per-step)
  for (int k = 0; k < 3; ++k) CHECK(last[k] >= first[k]);
}

TEST_CASE("asymptotic law: quantiles match the reference critical values") {
  AsymptoticLaw law;
  CHECK(law.quantile(0.10) == doctest::Approx(3.221).epsilon(0.005 / 3.221));
  CHECK(law.quantile(0.05) == doctest::Approx(4.179).epsilon(0.005 / 4.179));
  CHECK(law.quantile(0.01) == doctest::Approx(6.745).epsilon(0.005 / 6.745));
  CHECK(law.quantile(0.001) == doctest::Approx(10.850).epsilon(0.005 / 10.850));

  CHECK(law.cdf(3.221) == doctest::Approx(0.90).epsilon(0.001 / 0.90));
  CHECK(law.cdf(4.179) == doctest::Approx(0.95).epsilon(0.001 / 0.95));
  CHECK(law.cdf(6.745) == doctest::Approx(0.99).epsilon(0.001 / 0.99));
  CHECK(law.cdf(10.850) == doctest::Approx(0.999).epsilon(0.001 / 0.999));
}

TEST_CASE("asymptotic law: quantile/cdf round trip") {
  AsymptoticLaw law;
  for (double a : {0.2, 0.05, 0.01}) {
    double q = law.quantile(a);
    CHECK(law.cdf(q) == doctest::Approx(1.0 - a).epsilon(1e-6));
  }
  CHECK_THROWS_AS(law.quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(law.cdf(0.0), std::invalid_argument);
  CHECK(law.cdf(0.5) == 0.0);
  CHECK(law.cdf(1.0) == 0.0);
}

TEST_CASE("asymptotic law: non-decreasing on a dense grid") {
  AsymptoticLaw law;
  const int points = 10000;
  double prev = -1.0;
  for (int i = 0; i < points; ++i) {
    double t = 0.01 + (50.0 - 0.01) * i / (points - 1.0);
    double g = law.cdf(t);
    CHECK(g >= prev);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
    prev = g;
  }
  CHECK(law.cdf(49.9999) > 1.0 - 1e-9);
}

TEST_CASE("asymptotic law: integral continuation matches long summation") {
  // near t = 1 the implementation switches from term-by-term summation to an
  // integral over a continuous degrees-of-freedom parameter; summing a few
  // hundred thousand terms directly is slow but possible and pins it down
  AsymptoticLaw law;
  for (double t : {1.05, 1.08}) {
    double sum = 0.0;
    for (std::size_t j = 1; j <= 400000; ++j) {
      double p = (j <= 512)
                     ? special::chi2_tail(static_cast<unsigned>(j), j * t)
                     : special::chi2_tail_saddlepoint(static_cast<double>(j),
                                                      j * t);
      double term = p / static_cast<double>(j);
      sum += term;
      if (term < 1e-15 && j > 4) break;
    }
    CHECK(law.cdf(t) == doctest::Approx(std::exp(-sum)).epsilon(1e-6));
  }
}

TEST_CASE("asymptotic law: cutoff insensitivity") {
  AsymptoticLaw a{200, 1e-12};
  AsymptoticLaw b{400, 1e-12};
  for (double t : {0.5, 0.9, 1.05, 1.2, 1.5, 2.0, 3.221, 4.179, 10.0, 40.0})
    CHECK(std::fabs(a.cdf(t) - b.cdf(t)) < 1e-10);
}

TEST_CASE("asymptotic p-values reproduce the published mapping") {
  AsymptoticLaw law;
  TestOutcome o;
  o.method = Method::os_rank;
  auto check = [&](double stat, double want) {
    o.statistic = stat;
    CHECK(std::fabs(p_value(o, law) - want) < 1e-4);
  };
  check(8.44, 0.00379);
  check(11.05, 0.00089);
  check(5.26, 0.02465);
  check(5.77, 0.01795);
  check(17.44, 0.00003);
  o.statistic = 38.99;
  CHECK(p_value(o, law) < 1e-5);
  o.statistic = 306.92;
  CHECK(p_value(o, law) < 1e-5);

  o.method = Method::os_raw;  // shared limiting law
  o.statistic = 5.77;
  CHECK(std::fabs(p_value(o, law) - 0.01795) < 1e-4);

  o.method = Method::bayes_rank;
  CHECK_THROWS_AS(p_value(o, law), std::invalid_argument);
}

TEST_CASE("permutation p-values: boundaries and mismatches") {
  NullDistribution d = exact_null(5, {Method::os_rank, 0});
  TestOutcome o;
  o.method = Method::os_rank;
  o.statistic = -1.0;  // below the entire support
  CHECK(p_value(o, d) == 1.0);
  o.statistic = 1e9;
  CHECK(p_value(o, d) == 0.0);
  o.method = Method::bayes_rank;
  CHECK_THROWS_AS(p_value(o, d), std::invalid_argument);
}

TEST_CASE("exact p-values are super-uniform over all permutations (n=5)") {
  StatisticId id{Method::os_rank, 0};
  NullDistribution d = exact_null(5, id);
  RankStatKernel kernel(5, id);
  std::vector<int> perm{1, 2, 3, 4, 5};
  std::vector<double> ps;
  double scale = table_scale_factor(Method::os_rank, 5);
  do {
    ps.push_back(d.tail_probability(kernel.from_ranks(perm) * scale));
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(ps.begin(), ps.end());
  for (std::size_t k = 0; k < ps.size(); ++k)
    CHECK(ps[k] >= (k + 1.0) / 120.0 - 1e-12);
}

TEST_CASE("bayes_limit_sample: positivity, median, truncation stability") {
  std::vector<double> s = bayes_limit_sample(100000, 1, 7);
  for (double v : {s.front(), s.back()}) CHECK(v > 0.0);

  //  median of exp(Z^2/2) = exp(median(chi^2_1)/2); root-find the median
  double lo = 0.1, hi = 2.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (special::chi2_tail(1, mid) > 0.5 ? lo : hi) = mid;
  }
  double want = std::exp(0.25 * (lo + hi));
  CHECK(want == doctest::Approx(1.2554).epsilon(1e-4));
  double med = 0.5 * (s[49999] + s[50000]);
  CHECK(med == doctest::Approx(want).epsilon(0.01));

  std::vector<double> t100 = bayes_limit_sample(20000, 100, 11);
  std::vector<double> t200 = bayes_limit_sample(20000, 200, 11);
  double q95a = t100[std::size_t(0.95 * 20000)];
  double q95b = t200[std::size_t(0.95 * 20000)];
  CHECK(std::fabs(q95b - q95a) / q95a < 0.01);
}

TEST_CASE("null table serialization round trip") {
  StatisticId id{Method::neyman_rank_mallows, 0};
  NullDistribution d = monte_carlo_null(6, id, 5000, 99);
  std::stringstream ss;
  write_null_table(d, ss);
  NullDistribution back = read_null_table(ss);
  CHECK(back.values == d.values);
  CHECK(back.tail_counts == d.tail_counts);
  CHECK(back.total == d.total);
  CHECK(back.seed == d.seed);
  CHECK(back.n == d.n);
  CHECK(back.kind == d.kind);
  CHECK(back.statistic.method == d.statistic.method);

  std::stringstream bad("not a table\n");
  CHECK_THROWS(read_null_table(bad));
}

TEST_CASE("default calibration policy") {
  CHECK(default_calibration(6) == Calibration::exact);
  CHECK(default_calibration(10) == Calibration::exact);
  CHECK(default_calibration(11) == Calibration::monte_carlo);
  CHECK(default_calibration(49) == Calibration::monte_carlo);
  CHECK(default_calibration(50) == Calibration::asymptotic);
  CHECK(default_calibration(500) == Calibration::asymptotic);
}

TEST_CASE("exact null for the other rank statistics is well formed") {
  for (StatisticId id : {StatisticId{Method::neyman_rank_bic, 0},
                         StatisticId{Method::bayes_rank, 0},
                         StatisticId{Method::neyman_fixed, 2}}) {
    NullDistribution d = exact_null(5, id);
    CHECK(d.total == 120);
    CHECK(d.tail_probability(d.values.front()) == 1.0);
    CHECK(d.tail_probability(d.values.back()) > 0.0);
  }
}
