#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "rankos/basis.hpp"

namespace rankos {

enum class Method {
  os_raw,             // order-selection statistic of the raw data
  os_rank,            // order-selection statistic of the rank scores
  neyman_fixed,       // smooth statistic with a fixed order
  neyman_rank_mallows,  // data-driven smooth statistic, Mallows penalty
  neyman_rank_bic,      // data-driven smooth statistic, BIC penalty
  bayes_rank            // exponentially weighted rank statistic
};

enum class Calibration { exact, monte_carlo, asymptotic, none };

std::string method_name(Method m);
Method method_from_name(const std::string& name);
std::string calibration_name(Calibration c);

struct TestOutcome {
  Method method = Method::os_rank;
  double statistic = 0.0;
  std::size_t selected_order = 0;  // 0 when the method is not order-selected
  std::optional<double> p_value;
  Calibration calibration = Calibration::none;
  std::optional<std::uint64_t> seed;
  bool tie_caveat = false;       // midrank policy was exercised
  bool residual_caveat = false;  // rank test on fitted-model residuals:
                                 // distribution-freeness holds only in the limit
};

enum class PenaltyKind { mallows, bic };

// Trace of the order-selection criterion values over m = 0..n-1.
struct CriterionTrace {
  std::vector<double> values;  // values[0] = 0
  std::size_t argmax = 0;      // smallest maximizing index
  PenaltyKind penalty = PenaltyKind::mallows;
  double A = 2.0;  // penalty constant (Mallows only)
};

// max over 1 <= m <= #coeffs of (1/m) sum_{j<=m} factor * c_j^2, plus the
// smallest maximizing m. Shared core of the order-selection statistics.
struct OsScan {
  double statistic = 0.0;
  std::size_t order = 0;
};
OsScan os_scan(std::span<const double> coeffs, double factor);

// Order-selection statistic of raw-data coefficients, scaled by a variance
// estimate: max_m (1/m) sum_{j<=m} 2n c_j^2 / sigma_sq.
TestOutcome os_statistic(const CoefficientVector& coeffs, double sigma_sq);

// Rank version: scores have limiting variance 1/12, so the scale is fixed
// and the statistic is distribution-free for every n.
TestOutcome rank_os_statistic(const UniformScores& scores);

// Criterion values M(m) = sum_{j<=m} 2n c_j^2/scale - pen(m), pen = A*m or
// (log n)*m. The argmax equivalence with the statistic (argmax > 0 iff the
// statistic exceeds A) is what gives the order-selection test its name.
CriterionTrace criterion_trace(const CoefficientVector& coeffs, double scale,
                               PenaltyKind penalty, double A = 2.0);

// Fixed-order smooth statistic sum_{j<=m} 2n c_j^2 / scale.
double neyman_statistic(const CoefficientVector& coeffs, double scale,
                        std::size_t m);

// Smooth statistic at the criterion-selected order (scale 1/12, Mallows A=2
// or BIC); statistic is 0 when the criterion selects order 0.
TestOutcome data_driven_neyman(const UniformScores& scores, PenaltyKind penalty);

// sum_{j=1}^{n-1} j^-2 exp(12 n c_j^2) from rank scores. Accumulates in log
// space when an exponent passes `guard`; throws OverflowError (carrying the
// log statistic) if the result is not representable.
TestOutcome bayes_statistic(const UniformScores& scores, double guard = 700.0);

// Same computation from a prepared coefficient vector (test seam).
double bayes_from_coefficients(std::span<const double> coeffs, std::size_t n,
                               double guard = 700.0);

// First-difference variance estimator sum (y_{i+1}-y_i)^2 / (2(n-1));
// consistent without fitting any model.
double variance_estimate(const DesignedSample& sample);

// 2n/scale, the factor multiplying squared coefficients in every scaled
// statistic. All rank paths call this with scale 1/12 so that repeated
// computations of the same statistic agree bit for bit.
inline double scaled_factor(std::size_t n, double scale) {
  return 2.0 * static_cast<double>(n) / scale;
}

// Argmax (smallest maximizer) of the criterion without materializing the
// trace; matches criterion_trace::argmax.
std::size_t criterion_argmax(std::span<const double> coeffs, std::size_t n,
                             double scale, PenaltyKind penalty, double A);

// sum_{j<=m} 2n c_j^2 / scale, the shared core of the smooth statistics.
double neyman_partial_sum(std::span<const double> coeffs, std::size_t n,
                          double scale, std::size_t m);

// Identifies a permutation-calibratable rank statistic; `order` is only
// meaningful for the fixed-order smooth statistic.
struct StatisticId {
  Method method = Method::os_rank;
  std::size_t order = 0;

  std::string id() const;
  static StatisticId from_id(const std::string& s);
};

// Evaluates a rank statistic for many permutations without reallocating.
// from_ranks produces exactly the value the public entry points produce for
// a sample with that rank vector (same expressions, same order of
// operations), which is what makes inclusive permutation p-values exact.
class RankStatKernel {
 public:
  RankStatKernel(std::size_t n, StatisticId id);

  double from_ranks(std::span<const int> ranks);  // ranks are 1..n
  double from_scores(std::span<const double> u);

  std::size_t n() const { return n_; }

 private:
  StatisticId id_;
  std::size_t n_;
  CosineBasis basis_;
  std::vector<double> u_;
  std::vector<double> coeffs_;
  std::vector<double> scratch_;
};

}  // namespace rankos
