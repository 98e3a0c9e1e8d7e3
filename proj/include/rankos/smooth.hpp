#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rankos/basis.hpp"

namespace rankos {

enum class SmoothScale { plain, raw_over_sigma, rank_sqrt12 };

// Truncated cosine series fit: scale_factor * (coeff0 + 2 sum_{j<=m} c_j
// cos(pi j x)). `fitted` holds the scaled values at the design points.
struct SmoothFit {
  std::size_t m = 0;
  double coeff0 = 0.0;
  std::vector<double> coeffs;  // j = 1..m
  double scale_factor = 1.0;
  SmoothScale scale = SmoothScale::plain;
  std::vector<double> fitted;

  double evaluate(double x) const;
};

// Series fit of the values at order m; coeff0 is the sample mean. The order
// 0 fit is the constant; increasing m never increases the residual sum of
// squares (nested projections).
SmoothFit series_smooth(std::span<const double> values, std::size_t m);

// Smallest maximizer of sum_{j<=m} 2n c_j^2/scale - A m over m = 0..n-1, the
// criterion-selected truncation point.
std::size_t select_truncation(const CoefficientVector& coeffs, double scale,
                              double A);

// Smooth of the rank scores at the criterion-selected order (scale 1/12),
// multiplied by sqrt(12); estimates the transformed regression function the
// rank test has power against. The mean term is sqrt(12)/2 (scores average
// exactly 1/2).
SmoothFit rank_smooth(const DesignedSample& sample, double A,
                      TiePolicy policy = TiePolicy::reject);

// The raw smooth divided by the estimated error standard deviation, and the
// rank smooth times sqrt(12), with the rank truncation taken equal to the
// raw one unless independent_truncation is set.
struct PairedSmooth {
  SmoothFit raw;   // scale raw_over_sigma
  SmoothFit rank;  // scale rank_sqrt12
  double sigma_hat = 0.0;
};
PairedSmooth paired_smooth(const DesignedSample& sample, double A,
                           bool independent_truncation = false,
                           TiePolicy policy = TiePolicy::reject);

// Discrete analogue of the mean transform the rank test sees: mu_i = (1/n)
// sum_k H(r_i - r_k) where H is the CDF of the difference of two errors.
std::vector<double> mu_function(std::span<const double> r_values,
                                const std::function<double(double)>& diff_cdf);

}  // namespace rankos
