#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rankos {

// Responses observed on the fixed midpoint design x_i = (i - 1/2)/n. The
// design points are implicit: they are fully determined by n.
struct DesignedSample {
  std::vector<double> y;

  // Validates n >= 2 and finiteness of every response.
  explicit DesignedSample(std::vector<double> values);

  std::size_t n() const { return y.size(); }
};

// The midpoint grid ((1-1/2)/n, ..., (n-1/2)/n).
std::vector<double> design_grid(std::size_t n);

enum class CoeffSource { raw, rank, normal_score, residual_rank };

// Cosine-basis coefficients c_j = (1/n) sum_i v_i cos(pi j x_i), j = 1..n-1.
struct CoefficientVector {
  CoeffSource source = CoeffSource::raw;
  std::size_t n = 0;             // originating sample size
  std::vector<double> values;    // values[j-1] is the j-th coefficient
};

// Rows cos(pi j x_i) of the cosine basis on the midpoint grid. Rows are
// precomputed and cached up to a size threshold; beyond it they are
// recomputed on demand into a caller scratch buffer, with identical
// expression order either way so results are bit-for-bit reproducible.
class CosineBasis {
 public:
  explicit CosineBasis(std::size_t n);

  std::size_t n() const { return n_; }
  const std::vector<double>& grid() const { return x_; }

  // Row j (1 <= j <= n-1). `scratch` must stay alive while the span is used.
  std::span<const double> row(std::size_t j, std::vector<double>& scratch) const;

 private:
  std::size_t n_;
  std::vector<double> x_;
  std::vector<double> cache_;  // empty when rows are streamed
};

// Coefficients into a preallocated buffer (size n-1); the hot path used by
// permutation enumeration and Monte Carlo loops.
void cosine_coefficients_into(std::span<const double> values,
                              const CosineBasis& basis, std::span<double> out,
                              std::vector<double>& scratch);

CoefficientVector cosine_coefficients(std::span<const double> values,
                                      CoeffSource source);

enum class TiePolicy { reject, midrank };

// Uniform rank scores u_i = R(Y_i)/(n+1); mean is exactly 1/2.
struct UniformScores {
  std::vector<double> u;
  bool had_ties = false;  // midrank policy resolved at least one tie
};

UniformScores rank_scores(const DesignedSample& sample,
                          TiePolicy policy = TiePolicy::reject);

// Same, for an arbitrary value vector (used for residual ranks).
UniformScores rank_scores(std::span<const double> values,
                          TiePolicy policy = TiePolicy::reject);

// Elementwise standard normal quantile of the scores.
std::vector<double> normal_scores(const UniformScores& scores);

// Deviations from the two defining identities of the basis:
// sum_i cos(pi j x_i) = 0 and sum_i cos^2(pi j x_i) = n/2 for j = 1..n-1.
struct BasisIdentityReport {
  std::size_t n = 0;
  double max_abs_row_sum = 0.0;    // worst |sum of row|
  double max_sumsq_deviation = 0.0;  // worst |sum of squares - n/2|
  bool within(double tol) const {
    return max_abs_row_sum <= tol && max_sumsq_deviation <= tol;
  }
};

BasisIdentityReport check_basis_identities(std::size_t n);

}  // namespace rankos
