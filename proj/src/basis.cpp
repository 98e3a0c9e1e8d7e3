#include "rankos/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rankos/errors.hpp"
#include "rankos/special.hpp"

namespace rankos {

namespace {

// Cache rows up to this size; 2048^2 doubles is ~32 MB.
constexpr std::size_t kCacheLimit = 2048;

inline double basis_value(std::size_t j, double x) {
  return std::cos(special::pi * static_cast<double>(j) * x);
}

// Fills cos(pi j x_i) for one row, enforcing the exact reflection symmetry
// cos(pi j (1-x)) = (-1)^j cos(pi j x) of the midpoint grid (and the exact
// values 0/+1/-1 at the center point). Keeps the row identities tight and
// makes mirror-image rank vectors give identical squared coefficients.
void fill_row(std::size_t j, std::span<const double> x, double* out) {
  const std::size_t n = x.size();
  const bool odd_j = (j % 2) != 0;
  for (std::size_t i = 0; i < n - 1 - i; ++i) {
    double v = basis_value(j, x[i]);
    out[i] = v;
    out[n - 1 - i] = odd_j ? -v : v;
  }
  if (n % 2 != 0) {
    std::size_t mid = n / 2;  // x = 1/2
    out[mid] = odd_j ? 0.0 : ((j / 2) % 2 != 0 ? -1.0 : 1.0);
  }
}

}  // namespace

DesignedSample::DesignedSample(std::vector<double> values) : y(std::move(values)) {
  if (y.size() < 2)
    throw std::invalid_argument("DesignedSample: need at least 2 responses");
  for (double v : y)
    if (!std::isfinite(v))
      throw std::invalid_argument("DesignedSample: responses must be finite");
}

std::vector<double> design_grid(std::size_t n) {
  if (n == 0) throw std::invalid_argument("design_grid: n must be >= 1");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  return x;
}

CosineBasis::CosineBasis(std::size_t n) : n_(n), x_(design_grid(n)) {
  if (n < 2) throw std::invalid_argument("CosineBasis: n must be >= 2");
  if (n <= kCacheLimit) {
    cache_.resize((n - 1) * n);
    for (std::size_t j = 1; j < n; ++j)
      fill_row(j, x_, cache_.data() + (j - 1) * n);
  }
}

std::span<const double> CosineBasis::row(std::size_t j,
                                         std::vector<double>& scratch) const {
  if (j == 0 || j >= n_)
    throw std::invalid_argument("CosineBasis::row: j out of range");
  if (!cache_.empty())
    return std::span<const double>(cache_.data() + (j - 1) * n_, n_);
  scratch.resize(n_);
  fill_row(j, x_, scratch.data());
  return std::span<const double>(scratch.data(), n_);
}

void cosine_coefficients_into(std::span<const double> values,
                              const CosineBasis& basis, std::span<double> out,
                              std::vector<double>& scratch) {
  const std::size_t n = basis.n();
  if (values.size() != n)
    throw std::invalid_argument("cosine_coefficients: size mismatch");
  if (out.size() != n - 1)
    throw std::invalid_argument("cosine_coefficients: output size mismatch");
  for (std::size_t j = 1; j < n; ++j) {
    std::span<const double> row = basis.row(j, scratch);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += values[i] * row[i];
    out[j - 1] = s / static_cast<double>(n);
  }
}

CoefficientVector cosine_coefficients(std::span<const double> values,
                                      CoeffSource source) {
  const std::size_t n = values.size();
  if (n < 2)
    throw std::invalid_argument("cosine_coefficients: need at least 2 values");
  for (double v : values)
    if (!std::isfinite(v))
      throw std::invalid_argument("cosine_coefficients: values must be finite");
  CoefficientVector cv;
  cv.source = source;
  cv.n = n;
  cv.values.resize(n - 1);
  CosineBasis basis(n);
  std::vector<double> scratch;
  cosine_coefficients_into(values, basis, cv.values, scratch);
  return cv;
}

UniformScores rank_scores(std::span<const double> values, TiePolicy policy) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("rank_scores: need at least 2 values");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  UniformScores out;
  out.u.resize(n);
  const double denom = static_cast<double>(n) + 1.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t k = i;
    while (k + 1 < n && values[order[k + 1]] == values[order[i]]) ++k;
    if (k > i) {
      if (policy == TiePolicy::reject)
        throw TiesError("rank_scores: tied responses (use the midrank policy "
                        "to proceed with a caveat)");
      out.had_ties = true;
      // midrank: average of the ranks i+1 .. k+1
      double mid = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(k + 1));
      for (std::size_t t = i; t <= k; ++t) out.u[order[t]] = mid / denom;
    } else {
      out.u[order[i]] = static_cast<double>(i + 1) / denom;
    }
    i = k + 1;
  }
  return out;
}

UniformScores rank_scores(const DesignedSample& sample, TiePolicy policy) {
  return rank_scores(std::span<const double>(sample.y), policy);
}

std::vector<double> normal_scores(const UniformScores& scores) {
  std::vector<double> z(scores.u.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    double u = scores.u[i];
    if (!(u > 0.0 && u < 1.0))
      throw std::invalid_argument("normal_scores: scores must lie in (0,1)");
    z[i] = special::normal_quantile(u);
  }
  return z;
}

BasisIdentityReport check_basis_identities(std::size_t n) {
  if (n < 2)
    throw std::invalid_argument("check_basis_identities: n must be >= 2");
  CosineBasis basis(n);
  std::vector<double> scratch;
  BasisIdentityReport rep;
  rep.n = n;
  const double half_n = 0.5 * static_cast<double>(n);
  for (std::size_t j = 1; j < n; ++j) {
    std::span<const double> row = basis.row(j, scratch);
    double s = 0.0, s2 = 0.0;
    for (double c : row) {
      s += c;
      s2 += c * c;
    }
    rep.max_abs_row_sum = std::max(rep.max_abs_row_sum, std::fabs(s));
    rep.max_sumsq_deviation =
        std::max(rep.max_sumsq_deviation, std::fabs(s2 - half_n));
  }
  return rep;
}

}  // namespace rankos
