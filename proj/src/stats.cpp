#include "rankos/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rankos/errors.hpp"

namespace rankos {

std::string method_name(Method m) {
  switch (m) {
    case Method::os_raw: return "os_raw";
    case Method::os_rank: return "os_rank";
    case Method::neyman_fixed: return "neyman_fixed";
    case Method::neyman_rank_mallows: return "neyman_rank_mallows";
    case Method::neyman_rank_bic: return "neyman_rank_bic";
    case Method::bayes_rank: return "bayes_rank";
  }
  throw std::invalid_argument("method_name: bad enum value");
}

Method method_from_name(const std::string& name) {
  if (name == "os_raw") return Method::os_raw;
  if (name == "os_rank") return Method::os_rank;
  if (name == "neyman_fixed") return Method::neyman_fixed;
  if (name == "neyman_rank_mallows") return Method::neyman_rank_mallows;
  if (name == "neyman_rank_bic") return Method::neyman_rank_bic;
  if (name == "bayes_rank") return Method::bayes_rank;
  throw std::invalid_argument("unknown method: " + name);
}

std::string calibration_name(Calibration c) {
  switch (c) {
    case Calibration::exact: return "exact";
    case Calibration::monte_carlo: return "monte_carlo";
    case Calibration::asymptotic: return "asymptotic";
    case Calibration::none: return "none";
  }
  throw std::invalid_argument("calibration_name: bad enum value");
}

OsScan os_scan(std::span<const double> coeffs, double factor) {
  OsScan best;
  double cum = 0.0;
  for (std::size_t m = 1; m <= coeffs.size(); ++m) {
    double c = coeffs[m - 1];
    cum += factor * c * c;
    double avg = cum / static_cast<double>(m);
    if (avg > best.statistic) {
      best.statistic = avg;
      best.order = m;
    }
  }
  return best;
}

TestOutcome os_statistic(const CoefficientVector& coeffs, double sigma_sq) {
  if (!(sigma_sq > 0.0))
    throw std::invalid_argument("os_statistic: sigma_sq must be positive");
  OsScan scan = os_scan(coeffs.values, scaled_factor(coeffs.n, sigma_sq));
  TestOutcome out;
  out.method = Method::os_raw;
  out.statistic = scan.statistic;
  out.selected_order = scan.order;
  return out;
}

TestOutcome rank_os_statistic(const UniformScores& scores) {
  CoefficientVector coeffs = cosine_coefficients(scores.u, CoeffSource::rank);
  OsScan scan = os_scan(coeffs.values, scaled_factor(coeffs.n, 1.0 / 12.0));
  TestOutcome out;
  out.method = Method::os_rank;
  out.statistic = scan.statistic;
  out.selected_order = scan.order;
  out.tie_caveat = scores.had_ties;
  return out;
}

CriterionTrace criterion_trace(const CoefficientVector& coeffs, double scale,
                               PenaltyKind penalty, double A) {
  if (!(scale > 0.0))
    throw std::invalid_argument("criterion_trace: scale must be positive");
  if (penalty == PenaltyKind::mallows && !(A > 0.0))
    throw std::invalid_argument("criterion_trace: Mallows A must be positive");
  const std::size_t n = coeffs.n;
  const double factor = scaled_factor(n, scale);
  const double log_n = std::log(static_cast<double>(n));
  CriterionTrace trace;
  trace.penalty = penalty;
  trace.A = A;
  trace.values.resize(n);
  trace.values[0] = 0.0;
  double cum = 0.0, best = 0.0;
  for (std::size_t m = 1; m < n; ++m) {
    double c = coeffs.values[m - 1];
    cum += factor * c * c;
    double pen = (penalty == PenaltyKind::mallows)
                     ? A * static_cast<double>(m)
                     : log_n * static_cast<double>(m);
    trace.values[m] = cum - pen;
    if (trace.values[m] > best) {
      best = trace.values[m];
      trace.argmax = m;
    }
  }
  return trace;
}

double neyman_partial_sum(std::span<const double> coeffs, std::size_t n,
                          double scale, std::size_t m) {
  const double factor = scaled_factor(n, scale);
  double cum = 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    double c = coeffs[j - 1];
    cum += factor * c * c;
  }
  return cum;
}

double neyman_statistic(const CoefficientVector& coeffs, double scale,
                        std::size_t m) {
  if (!(scale > 0.0))
    throw std::invalid_argument("neyman_statistic: scale must be positive");
  if (m < 1 || m > coeffs.values.size())
    throw std::invalid_argument("neyman_statistic: order out of range");
  return neyman_partial_sum(coeffs.values, coeffs.n, scale, m);
}

std::size_t criterion_argmax(std::span<const double> coeffs, std::size_t n,
                             double scale, PenaltyKind penalty, double A) {
  const double factor = scaled_factor(n, scale);
  const double log_n = std::log(static_cast<double>(n));
  double cum = 0.0, best = 0.0;
  std::size_t argmax = 0;
  for (std::size_t m = 1; m <= coeffs.size(); ++m) {
    double c = coeffs[m - 1];
    cum += factor * c * c;
    double pen = (penalty == PenaltyKind::mallows)
                     ? A * static_cast<double>(m)
                     : log_n * static_cast<double>(m);
    double value = cum - pen;
    if (value > best) {
      best = value;
      argmax = m;
    }
  }
  return argmax;
}

TestOutcome data_driven_neyman(const UniformScores& scores, PenaltyKind penalty) {
  CoefficientVector coeffs = cosine_coefficients(scores.u, CoeffSource::rank);
  CriterionTrace trace = criterion_trace(coeffs, 1.0 / 12.0, penalty, 2.0);
  TestOutcome out;
  out.method = (penalty == PenaltyKind::mallows) ? Method::neyman_rank_mallows
                                                 : Method::neyman_rank_bic;
  out.selected_order = trace.argmax;
  out.statistic = (trace.argmax == 0)
                      ? 0.0
                      : neyman_statistic(coeffs, 1.0 / 12.0, trace.argmax);
  out.tie_caveat = scores.had_ties;
  return out;
}

double bayes_from_coefficients(std::span<const double> coeffs, std::size_t n,
                               double guard) {
  const double factor = 12.0 * static_cast<double>(n);
  bool log_space = false;
  for (double c : coeffs)
    if (factor * c * c > guard) log_space = true;

  if (!log_space) {
    double sum = 0.0;
    for (std::size_t j = 1; j <= coeffs.size(); ++j) {
      double c = coeffs[j - 1];
      sum += std::exp(factor * c * c) / (static_cast<double>(j) * j);
    }
    return sum;
  }

  // log-sum-exp over terms -2 log j + 12 n c_j^2
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(coeffs.size());
  for (std::size_t j = 1; j <= coeffs.size(); ++j) {
    double c = coeffs[j - 1];
    terms[j - 1] = factor * c * c - 2.0 * std::log(static_cast<double>(j));
    if (terms[j - 1] > max_term) max_term = terms[j - 1];
  }
  double rest = 0.0;
  for (double t : terms) rest += std::exp(t - max_term);
  double log_value = max_term + std::log(rest);
  if (log_value > 709.0)
    throw OverflowError("bayes statistic overflows a double; log value attached",
                        log_value);
  return std::exp(log_value);
}

TestOutcome bayes_statistic(const UniformScores& scores, double guard) {
  CoefficientVector coeffs = cosine_coefficients(scores.u, CoeffSource::rank);
  TestOutcome out;
  out.method = Method::bayes_rank;
  out.statistic = bayes_from_coefficients(coeffs.values, coeffs.n, guard);
  out.tie_caveat = scores.had_ties;
  return out;
}

double variance_estimate(const DesignedSample& sample) {
  const std::size_t n = sample.n();
  if (n < 3)
    throw std::invalid_argument("variance_estimate: need at least 3 responses");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double d = sample.y[i + 1] - sample.y[i];
    sum += d * d;
  }
  return sum / (2.0 * static_cast<double>(n - 1));
}

std::string StatisticId::id() const {
  if (method == Method::neyman_fixed)
    return "neyman_fixed_m" + std::to_string(order);
  return method_name(method);
}

StatisticId StatisticId::from_id(const std::string& s) {
  StatisticId out;
  const std::string prefix = "neyman_fixed_m";
  if (s.rfind(prefix, 0) == 0) {
    out.method = Method::neyman_fixed;
    out.order = static_cast<std::size_t>(std::stoul(s.substr(prefix.size())));
    return out;
  }
  out.method = method_from_name(s);
  return out;
}

RankStatKernel::RankStatKernel(std::size_t n, StatisticId id)
    : id_(id), n_(n), basis_(n), u_(n), coeffs_(n - 1) {
  switch (id.method) {
    case Method::os_rank:
    case Method::neyman_rank_mallows:
    case Method::neyman_rank_bic:
    case Method::bayes_rank:
      break;
    case Method::neyman_fixed:
      if (id.order < 1 || id.order > n - 1)
        throw std::invalid_argument("RankStatKernel: order out of range");
      break;
    default:
      throw std::invalid_argument(
          "RankStatKernel: not a rank statistic; permutation calibration does "
          "not apply");
  }
}

double RankStatKernel::from_ranks(std::span<const int> ranks) {
  const double denom = static_cast<double>(n_) + 1.0;
  for (std::size_t i = 0; i < n_; ++i)
    u_[i] = static_cast<double>(ranks[i]) / denom;
  return from_scores(u_);
}

double RankStatKernel::from_scores(std::span<const double> u) {
  cosine_coefficients_into(u, basis_, coeffs_, scratch_);
  const double scale = 1.0 / 12.0;
  switch (id_.method) {
    case Method::os_rank:
      return os_scan(coeffs_, scaled_factor(n_, scale)).statistic;
    case Method::neyman_rank_mallows:
    case Method::neyman_rank_bic: {
      PenaltyKind pen = (id_.method == Method::neyman_rank_mallows)
                            ? PenaltyKind::mallows
                            : PenaltyKind::bic;
      std::size_t m = criterion_argmax(coeffs_, n_, scale, pen, 2.0);
      return (m == 0) ? 0.0 : neyman_partial_sum(coeffs_, n_, scale, m);
    }
    case Method::neyman_fixed:
      return neyman_partial_sum(coeffs_, n_, scale, id_.order);
    case Method::bayes_rank:
      return bayes_from_coefficients(coeffs_, n_);
    default:
      throw std::invalid_argument("RankStatKernel: unreachable method");
  }
}

}  // namespace rankos
