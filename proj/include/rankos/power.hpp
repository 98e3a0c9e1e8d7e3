#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rankos/calibrate.hpp"
#include "rankos/laws.hpp"
#include "rankos/linmod.hpp"

namespace rankos {

// A drifting alternative beta(x)/sqrt(n) paired with an error law. beta is
// any bounded function on [0,1]; its cosine coefficients are taken by
// midpoint quadrature on `quadrature_grid` points (exact for pure cosine
// shapes by discrete orthogonality).
struct LocalAlternativeSpec {
  std::function<double(double)> beta;
  ErrorLaw law = ErrorLaw::normal();
  std::size_t quadrature_grid = 4096;

  static LocalAlternativeSpec cosine_shape(double amplitude, unsigned k,
                                           ErrorLaw law);

  std::vector<double> beta_on_grid(std::size_t n) const;
  // beta_j for j = 1..count
  std::vector<double> fourier_coefficients(std::size_t count) const;
};

// Midpoint-rule cosine coefficient of a shape sampled on the design grid.
double fourier_beta(std::span<const double> beta_grid, std::size_t j);

struct PowerEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  std::size_t truncation_used = 0;  // after any doubling (limiting laws only)
};

// Limiting power of the rank test against the local alternative: the
// exceedance probability of max_m (1/m) sum_{j<=m} (Z_j + sqrt(24) h(0)
// beta_j)^2 over the 1-alpha quantile of the limiting null law. The max is
// truncated; if more than 0.1% of the rejecting draws have their maximizer
// beyond truncation/2 (the draws a longer series could still change), the
// truncation doubles and the run repeats.
PowerEstimate limiting_power_rank(const LocalAlternativeSpec& spec, double alpha,
                                  std::size_t truncation, std::uint64_t reps,
                                  std::uint64_t seed, unsigned threads = 1);

// Same with the raw-data shift sqrt(2) beta_j / sigma (the error law needs
// four moments for this limit to describe the raw test).
PowerEstimate limiting_power_raw(const LocalAlternativeSpec& spec, double alpha,
                                 std::size_t truncation, std::uint64_t reps,
                                 std::uint64_t seed, unsigned threads = 1);

// Rejection rate of the chosen test at level alpha over simulated samples
// Y_i = beta(x_i)/sqrt(n) + eps_i.
PowerEstimate empirical_power(const LocalAlternativeSpec& spec, std::size_t n,
                              StatisticId id, double alpha,
                              const CalibrationChoice& calibration,
                              std::uint64_t reps, std::uint64_t seed,
                              unsigned threads = 1);

// Asymptotic relative efficiency of the rank test to the raw-data test:
// 12 sigma^2 (integral of f^2)^2, equal to 12 sigma^2 h(0)^2. Identical to
// the classical Wilcoxon-versus-t efficiency, and scale free.
struct AreReport {
  double closed_form = 0.0;
  double quadrature = 0.0;
  double value = 0.0;  // closed form
};
AreReport are_report(const ErrorLaw& law);
double are(const ErrorLaw& law);

// Whether are(t_k) exceeds 1; needs k >= 5 for the raw-test side condition.
bool are_sign_check(unsigned k);

}  // namespace rankos
