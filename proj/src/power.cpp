#include "rankos/power.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "rankos/errors.hpp"
#include "rankos/rng.hpp"
#include "rankos/special.hpp"

namespace rankos {

LocalAlternativeSpec LocalAlternativeSpec::cosine_shape(double amplitude,
                                                        unsigned k,
                                                        ErrorLaw law) {
  LocalAlternativeSpec spec;
  spec.beta = [amplitude, k](double x) {
    return amplitude * std::cos(special::pi * static_cast<double>(k) * x);
  };
  spec.law = law;
  return spec;
}

std::vector<double> LocalAlternativeSpec::beta_on_grid(std::size_t n) const {
  std::vector<double> x = design_grid(n);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = beta(x[i]);
  return out;
}

std::vector<double> LocalAlternativeSpec::fourier_coefficients(
    std::size_t count) const {
  std::vector<double> grid = beta_on_grid(quadrature_grid);
  std::vector<double> out(count);
  for (std::size_t j = 1; j <= count; ++j) out[j - 1] = fourier_beta(grid, j);
  return out;
}

double fourier_beta(std::span<const double> beta_grid, std::size_t j) {
  if (j < 1) throw std::invalid_argument("fourier_beta: j must be >= 1");
  const std::size_t n = beta_grid.size();
  std::vector<double> x = design_grid(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += beta_grid[i] * std::cos(special::pi * static_cast<double>(j) * x[i]);
  return s / static_cast<double>(n);
}

namespace {

// P(max_m (1/m) sum_{j<=m} (Z_j + shift_j)^2 >= threshold) by simulation,
// sharded over per-replicate substreams. deep_exceed counts rejections whose
// maximizer landed in the upper half of the truncation range; those are the
// draws where a longer series could still be raising the max.
struct ShiftedMaxResult {
  std::uint64_t exceed = 0;
  std::uint64_t deep_exceed = 0;
};

ShiftedMaxResult simulate_shifted_max(std::span<const double> shifts,
                                      double threshold, std::uint64_t reps,
                                      std::uint64_t seed, unsigned threads) {
  if (threads < 1) threads = 1;
  const std::size_t truncation = shifts.size();
  std::vector<ShiftedMaxResult> parts(threads);
  auto work = [&](unsigned t) {
    std::uint64_t lo = reps * t / threads, hi = reps * (t + 1) / threads;
    ShiftedMaxResult local;
    for (std::uint64_t r = lo; r < hi; ++r) {
      Rng rng = Rng::substream(seed, r);
      double cum = 0.0, best = 0.0;
      std::size_t argmax = 1;
      for (std::size_t m = 1; m <= truncation; ++m) {
        double z = rng.normal() + shifts[m - 1];
        cum += z * z;
        double avg = cum / static_cast<double>(m);
        if (avg > best) {
          best = avg;
          argmax = m;
        }
      }
      if (best >= threshold) {
        ++local.exceed;
        if (argmax > truncation / 2) ++local.deep_exceed;
      }
    }
    parts[t] = local;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  ShiftedMaxResult total;
  for (const auto& p : parts) {
    total.exceed += p.exceed;
    total.deep_exceed += p.deep_exceed;
  }
  return total;
}

PowerEstimate limiting_power_impl(const LocalAlternativeSpec& spec, double alpha,
                                  std::size_t truncation, std::uint64_t reps,
                                  std::uint64_t seed, unsigned threads,
                                  double shift_factor) {
  if (truncation < 1)
    throw std::invalid_argument("limiting power: truncation must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("limiting power: alpha must be in (0,1)");
  const double threshold = AsymptoticLaw{}.quantile(alpha);

  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<double> beta_j = spec.fourier_coefficients(truncation);
    for (double& b : beta_j) b *= shift_factor;
    ShiftedMaxResult res =
        simulate_shifted_max(beta_j, threshold, reps, seed, threads);
    if (res.deep_exceed * 1000 <= reps || attempt == 3) {
      double p = static_cast<double>(res.exceed) / static_cast<double>(reps);
      PowerEstimate est;
      est.value = p;
      est.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
      est.reps = reps;
      est.seed = seed;
      est.truncation_used = truncation;
      return est;
    }
    truncation *= 2;  // maximizer pushed into the tail; extend the max
  }
  throw std::runtime_error("limiting power: truncation did not stabilize");
}

}  // namespace

PowerEstimate limiting_power_rank(const LocalAlternativeSpec& spec, double alpha,
                                  std::size_t truncation, std::uint64_t reps,
                                  std::uint64_t seed, unsigned threads) {
  double shift = std::sqrt(24.0) * spec.law.h0();
  return limiting_power_impl(spec, alpha, truncation, reps, seed, threads,
                             shift);
}

PowerEstimate limiting_power_raw(const LocalAlternativeSpec& spec, double alpha,
                                 std::size_t truncation, std::uint64_t reps,
                                 std::uint64_t seed, unsigned threads) {
  double sigma = std::sqrt(spec.law.variance());
  double shift = std::sqrt(2.0) / sigma;
  return limiting_power_impl(spec, alpha, truncation, reps, seed, threads,
                             shift);
}

PowerEstimate empirical_power(const LocalAlternativeSpec& spec, std::size_t n,
                              StatisticId id, double alpha,
                              const CalibrationChoice& calibration,
                              std::uint64_t reps, std::uint64_t seed,
                              unsigned threads) {
  if (n < 2) throw std::invalid_argument("empirical_power: n must be >= 2");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("empirical_power: alpha must be in (0,1)");
  if (threads < 1) threads = 1;

  // signal on the design grid, already scaled by 1/sqrt(n)
  std::vector<double> signal = spec.beta_on_grid(n);
  const double root_n = std::sqrt(static_cast<double>(n));
  for (double& s : signal) s /= root_n;

  const bool raw = (id.method == Method::os_raw);

  // decision rule, shared across replicates
  NullDistribution null_dist;
  double g_threshold = 0.0;
  double table_factor = 1.0;
  switch (calibration.kind) {
    case Calibration::exact:
      null_dist = exact_null(n, id, calibration.enum_cap);
      table_factor = table_scale_factor(id.method, n);
      break;
    case Calibration::monte_carlo:
      null_dist = monte_carlo_null(n, id, calibration.reps, calibration.seed,
                                   threads);
      table_factor = table_scale_factor(id.method, n);
      break;
    case Calibration::asymptotic:
      if (id.method == Method::os_rank || id.method == Method::os_raw)
        g_threshold = AsymptoticLaw{}.quantile(alpha);
      else if (id.method != Method::neyman_fixed)
        throw std::invalid_argument(
            "empirical_power: no asymptotic law for " + method_name(id.method));
      break;
    case Calibration::none:
      throw std::invalid_argument("empirical_power: calibration required");
  }

  std::vector<std::uint64_t> rejects(threads, 0);
  auto work = [&](unsigned t) {
    std::uint64_t lo = reps * t / threads, hi = reps * (t + 1) / threads;
    RankStatKernel kernel(n, raw ? StatisticId{Method::os_rank, 0} : id);
    CosineBasis basis(n);
    std::vector<double> y(n), coeffs(n - 1), scratch;
    std::vector<std::size_t> order(n);
    std::vector<int> ranks(n);
    std::uint64_t count = 0;
    for (std::uint64_t r = lo; r < hi; ++r) {
      Rng rng = Rng::substream(seed, r);
      for (std::size_t i = 0; i < n; ++i)
        y[i] = signal[i] + spec.law.sample(rng);

      double stat;
      if (raw) {
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
          double d = y[i + 1] - y[i];
          sum += d * d;
        }
        double sigma_sq = sum / (2.0 * static_cast<double>(n - 1));
        cosine_coefficients_into(y, basis, coeffs, scratch);
        stat = os_scan(coeffs, scaled_factor(n, sigma_sq)).statistic;
      } else {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
        for (std::size_t i = 0; i < n; ++i)
          ranks[order[i]] = static_cast<int>(i + 1);
        stat = kernel.from_ranks(ranks);
      }

      bool reject;
      switch (calibration.kind) {
        case Calibration::exact:
        case Calibration::monte_carlo:
          reject = null_dist.tail_probability(stat * table_factor) <= alpha;
          break;
        case Calibration::asymptotic:
          if (id.method == Method::neyman_fixed)
            reject = special::chi2_tail(static_cast<unsigned>(id.order), stat) <=
                     alpha;
          else
            reject = stat >= g_threshold;
          break;
        default:
          reject = false;
      }
      if (reject) ++count;
    }
    rejects[t] = count;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  std::uint64_t total = std::accumulate(rejects.begin(), rejects.end(),
                                        std::uint64_t{0});
  PowerEstimate est;
  est.value = static_cast<double>(total) / static_cast<double>(reps);
  est.std_error =
      std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(reps));
  est.reps = reps;
  est.seed = seed;
  return est;
}

AreReport are_report(const ErrorLaw& law) {
  AreReport rep;
  double sigma_sq = law.variance();  // throws for laws without one
  double closed = law.f_sq_integral();
  double quad = special::integrate_real_line(
      [&law](double x) {
        double f = law.pdf(x);
        return f * f;
      },
      1e-10);
  rep.closed_form = 12.0 * sigma_sq * closed * closed;
  rep.quadrature = 12.0 * sigma_sq * quad * quad;
  rep.value = rep.closed_form;
  return rep;
}

double are(const ErrorLaw& law) { return are_report(law).value; }

bool are_sign_check(unsigned k) {
  if (k < 5)
    throw UnsupportedLawError(
        "are_sign_check: the raw-data side needs four moments; k >= 5 required");
  return are(ErrorLaw::student_t(k)) > 1.0;
}

}  // namespace rankos
