#include "rankos/linmod.hpp"

#include <cmath>
#include <stdexcept>

#include "rankos/errors.hpp"
#include "rankos/special.hpp"

namespace rankos {

LinearModelBasis LinearModelBasis::constant(std::size_t n) {
  return from_columns({std::vector<double>(n, 1.0)});
}

LinearModelBasis LinearModelBasis::polynomial(std::size_t n, std::size_t degree) {
  std::vector<double> x = design_grid(n);
  std::vector<std::vector<double>> cols(degree + 1, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double v = 1.0;
    for (std::size_t d = 0; d <= degree; ++d) {
      cols[d][i] = v;
      v *= x[i];
    }
  }
  return from_columns(std::move(cols));
}

LinearModelBasis LinearModelBasis::cosine(std::size_t n, std::size_t terms) {
  std::vector<double> x = design_grid(n);
  std::vector<std::vector<double>> cols(terms + 1, std::vector<double>(n, 1.0));
  for (std::size_t j = 1; j <= terms; ++j)
    for (std::size_t i = 0; i < n; ++i)
      cols[j][i] = std::cos(special::pi * static_cast<double>(j) * x[i]);
  return from_columns(std::move(cols));
}

LinearModelBasis LinearModelBasis::from_columns(
    std::vector<std::vector<double>> cols) {
  if (cols.empty())
    throw std::invalid_argument("LinearModelBasis: need at least one column");
  std::size_t n = cols.front().size();
  for (const auto& c : cols)
    if (c.size() != n)
      throw std::invalid_argument("LinearModelBasis: ragged columns");
  LinearModelBasis basis;
  basis.columns = std::move(cols);
  return basis;
}

ResidualSample least_squares_fit(const DesignedSample& sample,
                                 const LinearModelBasis& basis) {
  const std::size_t n = sample.n(), p = basis.p();
  if (basis.n() != n)
    throw std::invalid_argument("least_squares_fit: basis/sample size mismatch");
  if (p > n - 1)
    throw std::invalid_argument("least_squares_fit: need p <= n - 1");

  // modified Gram-Schmidt with stored R
  std::vector<std::vector<double>> q(p, std::vector<double>(n));
  std::vector<std::vector<double>> r(p, std::vector<double>(p, 0.0));
  double max_norm = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (double v : basis.columns[j]) s += v * v;
    max_norm = std::max(max_norm, std::sqrt(s));
  }
  const double tol = 1e-10 * max_norm;

  for (std::size_t j = 0; j < p; ++j) {
    q[j] = basis.columns[j];
    for (std::size_t i = 0; i < j; ++i) {
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += q[i][k] * q[j][k];
      r[i][j] = dot;
      for (std::size_t k = 0; k < n; ++k) q[j][k] -= dot * q[i][k];
    }
    double norm = 0.0;
    for (double v : q[j]) norm += v * v;
    norm = std::sqrt(norm);
    if (norm <= tol)
      throw SingularDesignError(
          "least_squares_fit: design matrix is rank deficient");
    r[j][j] = norm;
    for (double& v : q[j]) v /= norm;
  }

  // residuals e = y - Q Q^T y, coefficients from R theta = Q^T y
  std::vector<double> qty(p);
  for (std::size_t j = 0; j < p; ++j) {
    double dot = 0.0;
    for (std::size_t k = 0; k < n; ++k) dot += q[j][k] * sample.y[k];
    qty[j] = dot;
  }
  ResidualSample out;
  out.p = p;
  for (double v : sample.y)
    out.response_scale = std::max(out.response_scale, std::fabs(v));
  out.residuals = sample.y;
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < n; ++k)
      out.residuals[k] -= qty[j] * q[j][k];

  out.theta_hat.resize(p);
  for (std::size_t j = p; j-- > 0;) {
    double s = qty[j];
    for (std::size_t i = j + 1; i < p; ++i) s -= r[j][i] * out.theta_hat[i];
    out.theta_hat[j] = s / r[j][j];
  }
  return out;
}

void attach_p_value(TestOutcome& outcome, std::size_t n, StatisticId id,
                    const CalibrationChoice& choice) {
  switch (choice.kind) {
    case Calibration::none:
      outcome.calibration = Calibration::none;
      outcome.p_value.reset();
      return;
    case Calibration::exact: {
      NullDistribution dist = exact_null(n, id, choice.enum_cap);
      outcome.p_value = p_value(outcome, dist);
      outcome.calibration = Calibration::exact;
      return;
    }
    case Calibration::monte_carlo: {
      NullDistribution dist =
          monte_carlo_null(n, id, choice.reps, choice.seed, choice.threads);
      outcome.p_value = p_value(outcome, dist);
      outcome.calibration = Calibration::monte_carlo;
      outcome.seed = choice.seed;
      return;
    }
    case Calibration::asymptotic: {
      if (outcome.method == Method::os_rank || outcome.method == Method::os_raw) {
        outcome.p_value = p_value(outcome, AsymptoticLaw{});
      } else if (outcome.method == Method::neyman_fixed) {
        outcome.p_value = special::chi2_tail(static_cast<unsigned>(id.order),
                                             outcome.statistic);
      } else {
        throw std::invalid_argument(
            "attach_p_value: no asymptotic law for " +
            method_name(outcome.method) + "; use simulation calibration");
      }
      outcome.calibration = Calibration::asymptotic;
      return;
    }
  }
}

namespace {

void check_not_degenerate(const ResidualSample& resid) {
  double max_abs = 0.0;
  for (double e : resid.residuals) max_abs = std::max(max_abs, std::fabs(e));
  if (max_abs <= 1e-12 * resid.response_scale)
    throw DegenerateDataError(
        "residuals are numerically zero (the null model fits exactly)");
}

}  // namespace

TestOutcome residual_rank_test(const ResidualSample& resid, StatisticId id,
                               const CalibrationChoice& choice,
                               TiePolicy policy) {
  check_not_degenerate(resid);
  UniformScores scores = rank_scores(resid.residuals, policy);

  TestOutcome outcome;
  switch (id.method) {
    case Method::os_rank:
      outcome = rank_os_statistic(scores);
      break;
    case Method::neyman_rank_mallows:
      outcome = data_driven_neyman(scores, PenaltyKind::mallows);
      break;
    case Method::neyman_rank_bic:
      outcome = data_driven_neyman(scores, PenaltyKind::bic);
      break;
    case Method::bayes_rank:
      outcome = bayes_statistic(scores);
      break;
    case Method::neyman_fixed: {
      CoefficientVector coeffs =
          cosine_coefficients(scores.u, CoeffSource::residual_rank);
      outcome.method = Method::neyman_fixed;
      outcome.statistic = neyman_statistic(coeffs, 1.0 / 12.0, id.order);
      outcome.selected_order = id.order;
      outcome.tie_caveat = scores.had_ties;
      break;
    }
    default:
      throw std::invalid_argument(
          "residual_rank_test: not a rank statistic; use residual_raw_os_test");
  }
  attach_p_value(outcome, resid.residuals.size(), id, choice);
  outcome.residual_caveat = true;
  return outcome;
}

TestOutcome residual_raw_os_test(const ResidualSample& resid,
                                 const CalibrationChoice& choice) {
  check_not_degenerate(resid);
  const std::size_t n = resid.residuals.size();
  if (n <= resid.p)
    throw DegenerateDataError("residual_raw_os_test: no degrees of freedom");
  double sse = 0.0;
  for (double e : resid.residuals) sse += e * e;
  double sigma_sq = sse / static_cast<double>(n - resid.p);
  if (!(sigma_sq > 0.0))
    throw DegenerateDataError("residual_raw_os_test: zero residual variance");

  CoefficientVector coeffs =
      cosine_coefficients(resid.residuals, CoeffSource::raw);
  TestOutcome outcome = os_statistic(coeffs, sigma_sq);
  if (choice.kind != Calibration::asymptotic &&
      choice.kind != Calibration::none)
    throw std::invalid_argument(
        "residual_raw_os_test: raw statistic supports asymptotic calibration "
        "only (its permutation null is not distribution free)");
  attach_p_value(outcome, n, StatisticId{Method::os_raw, 0}, choice);
  outcome.residual_caveat = true;
  return outcome;
}

}  // namespace rankos
