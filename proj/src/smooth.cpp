#include "rankos/smooth.hpp"

#include <cmath>
#include <stdexcept>

#include "rankos/errors.hpp"
#include "rankos/special.hpp"
#include "rankos/stats.hpp"

namespace rankos {

double SmoothFit::evaluate(double x) const {
  double v = coeff0;
  for (std::size_t j = 1; j <= m; ++j)
    v += 2.0 * coeffs[j - 1] *
         std::cos(special::pi * static_cast<double>(j) * x);
  return scale_factor * v;
}

namespace {

SmoothFit build_fit(std::span<const double> values, std::size_t m,
                    double scale_factor, SmoothScale scale) {
  const std::size_t n = values.size();
  SmoothFit fit;
  fit.m = m;
  fit.scale_factor = scale_factor;
  fit.scale = scale;
  double mean = 0.0;
  for (double v : values) mean += v;
  fit.coeff0 = mean / static_cast<double>(n);

  CoefficientVector all = cosine_coefficients(values, CoeffSource::raw);
  fit.coeffs.assign(all.values.begin(),
                    all.values.begin() + static_cast<std::ptrdiff_t>(m));

  CosineBasis basis(n);
  std::vector<double> scratch;
  fit.fitted.assign(n, fit.coeff0);
  for (std::size_t j = 1; j <= m; ++j) {
    std::span<const double> row = basis.row(j, scratch);
    for (std::size_t i = 0; i < n; ++i)
      fit.fitted[i] += 2.0 * fit.coeffs[j - 1] * row[i];
  }
  for (double& v : fit.fitted) v *= scale_factor;
  return fit;
}

}  // namespace

SmoothFit series_smooth(std::span<const double> values, std::size_t m) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("series_smooth: need n >= 2");
  if (m > n - 1)
    throw std::invalid_argument("series_smooth: order must be <= n - 1");
  return build_fit(values, m, 1.0, SmoothScale::plain);
}

std::size_t select_truncation(const CoefficientVector& coeffs, double scale,
                              double A) {
  if (!(A > 0.0))
    throw std::invalid_argument("select_truncation: A must be positive");
  if (!(scale > 0.0))
    throw std::invalid_argument("select_truncation: scale must be positive");
  return criterion_argmax(coeffs.values, coeffs.n, scale, PenaltyKind::mallows,
                          A);
}

SmoothFit rank_smooth(const DesignedSample& sample, double A, TiePolicy policy) {
  UniformScores scores = rank_scores(sample, policy);
  CoefficientVector coeffs = cosine_coefficients(scores.u, CoeffSource::rank);
  std::size_t m = select_truncation(coeffs, 1.0 / 12.0, A);
  return build_fit(scores.u, m, std::sqrt(12.0), SmoothScale::rank_sqrt12);
}

PairedSmooth paired_smooth(const DesignedSample& sample, double A,
                           bool independent_truncation, TiePolicy policy) {
  double sigma_sq = variance_estimate(sample);
  if (!(sigma_sq > 0.0))
    throw DegenerateDataError("paired_smooth: zero variance estimate");

  CoefficientVector raw_coeffs = cosine_coefficients(sample.y, CoeffSource::raw);
  std::size_t m_raw = select_truncation(raw_coeffs, sigma_sq, A);

  UniformScores scores = rank_scores(sample, policy);
  CoefficientVector rank_coeffs =
      cosine_coefficients(scores.u, CoeffSource::rank);
  std::size_t m_rank = independent_truncation
                           ? select_truncation(rank_coeffs, 1.0 / 12.0, A)
                           : m_raw;

  PairedSmooth out;
  out.sigma_hat = std::sqrt(sigma_sq);
  out.raw = build_fit(sample.y, m_raw, 1.0 / out.sigma_hat,
                      SmoothScale::raw_over_sigma);
  out.rank =
      build_fit(scores.u, m_rank, std::sqrt(12.0), SmoothScale::rank_sqrt12);
  return out;
}

std::vector<double> mu_function(std::span<const double> r_values,
                                const std::function<double(double)>& diff_cdf) {
  const std::size_t n = r_values.size();
  std::vector<double> mu(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += diff_cdf(r_values[i] - r_values[k]);
    mu[i] = s / static_cast<double>(n);
  }
  return mu;
}

}  // namespace rankos
