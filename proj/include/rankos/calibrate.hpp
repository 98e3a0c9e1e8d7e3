#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "rankos/special.hpp"
#include "rankos/stats.hpp"

namespace rankos {

// Small-sample critical tables for the rank order-selection statistic are
// tabulated on the scale of rank scores R_i/n, while the statistic itself is
// defined with scores R_i/(n+1). The factor ((n+1)/n)^2 converts between the
// two; p-values are unaffected because the map is monotone and is applied to
// table and observed value alike.
double table_scale_factor(Method method, std::size_t n);

enum class NullKind { exact, monte_carlo };

std::string null_kind_name(NullKind k);

// A null distribution stored as distinct statistic values (table scale,
// ascending) with inclusive tail counts.
struct NullDistribution {
  NullKind kind = NullKind::exact;
  StatisticId statistic;
  std::size_t n = 0;
  std::vector<double> values;
  std::vector<std::uint64_t> tail_counts;  // tail_counts[i] = #draws >= values[i]
  std::uint64_t total = 0;                 // n! (exact) or reps (Monte Carlo)
  std::uint64_t seed = 0;                  // Monte Carlo only

  // P(statistic >= threshold), ties inclusive.
  double tail_probability(double threshold) const;
};

// Full permutation enumeration (lexicographic, streaming). `cap` is the
// resource acknowledgment: n above it raises CapacityError. n >= 12 is
// always refused (the value vector would not fit in memory).
NullDistribution exact_null(std::size_t n, StatisticId id, std::size_t cap = 10);

// Seeded Monte Carlo over uniform random permutations. Replicates draw from
// per-index substreams, so the result is identical for any thread count.
NullDistribution monte_carlo_null(std::size_t n, StatisticId id,
                                  std::uint64_t reps, std::uint64_t seed,
                                  unsigned threads = 1);

// Limiting null law G of the order-selection statistics: the exponential of
// a weighted chi-squared tail series,
//   G(t) = exp{ -sum_{j>=1} P(chi^2_j > j t) / j },  t > 1,  G(t) = 0 else.
// The 1/j weight is pinned by the reproduction of the published quantiles
// (3.221, 4.179, 6.745, 10.850 at levels .10/.05/.01/.001) and by direct
// simulation of max_m (1/m) sum_{j<=m} Z_j^2; both checks run in the test
// suite. Terms are summed until they fall below `tolerance` (series_cutoff
// is a floor on the count of exact terms); near t = 1, where the series
// decays too slowly to sum term by term, the remainder is continued as an
// integral over a continuous degrees-of-freedom parameter.
struct AsymptoticLaw {
  std::size_t series_cutoff = 200;
  double tolerance = 1e-12;

  double cdf(double t) const;
  double tail(double t) const;
  // t with G(t) = 1 - alpha, to absolute tolerance 1e-6.
  double quantile(double alpha) const;
};

// Inclusive permutation p-value P(null >= observed).
double p_value(const TestOutcome& outcome, const NullDistribution& null_dist);

// Asymptotic p-value 1 - G(statistic); valid for the order-selection
// statistics (raw and rank share the limiting law).
double p_value(const TestOutcome& outcome, const AsymptoticLaw& law);

// Draws from the limiting law of the exponentially weighted rank statistic:
// sum_{j<=truncation} j^-2 exp(Z_j^2 / 2). Returned sorted ascending.
std::vector<double> bayes_limit_sample(std::uint64_t reps,
                                       std::size_t truncation,
                                       std::uint64_t seed);

// Default calibration policy: exact while enumeration is cheap, Monte Carlo
// in the midrange, asymptotic for large n.
Calibration default_calibration(std::size_t n);

// CSV serialization (schema-stamped; header
// method,n,kind,reps,seed,threshold,tail_prob).
void write_null_table(const NullDistribution& dist, std::ostream& os);
NullDistribution read_null_table(std::istream& is);

}  // namespace rankos
