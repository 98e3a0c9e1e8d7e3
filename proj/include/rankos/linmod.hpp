#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rankos/basis.hpp"
#include "rankos/calibrate.hpp"
#include "rankos/stats.hpp"

namespace rankos {

// Known regression functions evaluated on the design grid; the columns of
// the design matrix for the null model being tested.
struct LinearModelBasis {
  std::vector<std::vector<double>> columns;

  static LinearModelBasis constant(std::size_t n);
  // 1, x, x^2, ..., x^degree
  static LinearModelBasis polynomial(std::size_t n, std::size_t degree);
  // 1, cos(pi x), ..., cos(pi k x)
  static LinearModelBasis cosine(std::size_t n, std::size_t terms);
  static LinearModelBasis from_columns(std::vector<std::vector<double>> cols);

  std::size_t n() const { return columns.empty() ? 0 : columns.front().size(); }
  std::size_t p() const { return columns.size(); }
};

struct ResidualSample {
  std::vector<double> residuals;
  std::vector<double> theta_hat;
  std::size_t p = 0;
  double response_scale = 1.0;  // max |y|, for the degenerate-residual check
};

// Least squares by modified Gram-Schmidt; columns whose orthogonalized norm
// falls below 1e-10 of the largest column norm raise SingularDesignError.
ResidualSample least_squares_fit(const DesignedSample& sample,
                                 const LinearModelBasis& basis);

// How a p-value should be attached to a computed statistic.
struct CalibrationChoice {
  Calibration kind = Calibration::asymptotic;
  std::uint64_t reps = 100000;
  std::uint64_t seed = 0;
  std::size_t enum_cap = 10;
  unsigned threads = 1;
};

// Computes a statistic's p-value with the requested calibration and fills
// the calibration fields of the outcome. Asymptotic calibration covers the
// order-selection statistics (limit law G) and the fixed-order smooth
// statistic (chi-squared with `order` degrees of freedom); the data-driven
// and exponentially weighted statistics are simulation-calibrated only.
void attach_p_value(TestOutcome& outcome, std::size_t n, StatisticId id,
                    const CalibrationChoice& choice);

// Rank test applied to the residuals of a fitted linear model. Exactness of
// the permutation null holds only asymptotically here (the residuals are not
// exchangeable at finite n), so the outcome carries residual_caveat.
TestOutcome residual_rank_test(const ResidualSample& resid, StatisticId id,
                               const CalibrationChoice& choice,
                               TiePolicy policy = TiePolicy::reject);

// Raw-data order-selection test on residuals; the variance estimate is the
// residual mean square with a p degrees-of-freedom correction.
TestOutcome residual_raw_os_test(const ResidualSample& resid,
                                 const CalibrationChoice& choice);

}  // namespace rankos
