#include "rankos/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rankos/errors.hpp"
#include "rankos/rng.hpp"

namespace rankos {

namespace {

std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}

// distinct values + inclusive tail counts from raw draws (consumed)
void compress_into(NullDistribution& dist, std::vector<double>& draws) {
  std::sort(draws.begin(), draws.end());
  dist.total = draws.size();
  dist.values.clear();
  dist.tail_counts.clear();
  std::size_t i = 0;
  while (i < draws.size()) {
    std::size_t k = i;
    while (k + 1 < draws.size() && draws[k + 1] == draws[i]) ++k;
    dist.values.push_back(draws[i]);
    dist.tail_counts.push_back(draws.size() - i);
    i = k + 1;
  }
  draws.clear();
  draws.shrink_to_fit();
}

}  // namespace

std::string null_kind_name(NullKind k) {
  return k == NullKind::exact ? "exact" : "monte_carlo";
}

double table_scale_factor(Method method, std::size_t n) {
  if (method != Method::os_rank) return 1.0;
  double r = (static_cast<double>(n) + 1.0) / static_cast<double>(n);
  return r * r;
}

double NullDistribution::tail_probability(double threshold) const {
  auto it = std::lower_bound(values.begin(), values.end(), threshold);
  if (it == values.end()) return 0.0;
  std::size_t idx = static_cast<std::size_t>(it - values.begin());
  return static_cast<double>(tail_counts[idx]) / static_cast<double>(total);
}

NullDistribution exact_null(std::size_t n, StatisticId id, std::size_t cap) {
  if (n < 2) throw std::invalid_argument("exact_null: n must be >= 2");
  if (n > 11)
    throw CapacityError("exact_null: n! outgrows memory beyond n = 11; use "
                        "monte_carlo_null");
  if (n > cap)
    throw CapacityError("exact_null: n exceeds the enumeration cap of " +
                        std::to_string(cap) +
                        "; raise the cap to acknowledge the cost or use "
                        "monte_carlo_null");

  RankStatKernel kernel(n, id);
  const double scale = table_scale_factor(id.method, n);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<double> draws;
  draws.reserve(factorial(n));
  do {
    draws.push_back(kernel.from_ranks(perm) * scale);
  } while (std::next_permutation(perm.begin(), perm.end()));

  NullDistribution dist;
  dist.kind = NullKind::exact;
  dist.statistic = id;
  dist.n = n;
  compress_into(dist, draws);
  return dist;
}

NullDistribution monte_carlo_null(std::size_t n, StatisticId id,
                                  std::uint64_t reps, std::uint64_t seed,
                                  unsigned threads) {
  if (n < 2) throw std::invalid_argument("monte_carlo_null: n must be >= 2");
  if (reps < 1) throw std::invalid_argument("monte_carlo_null: reps must be >= 1");
  if (threads < 1) threads = 1;

  const double scale = table_scale_factor(id.method, n);
  std::vector<std::vector<double>> shards(threads);
  auto work = [&](unsigned t) {
    std::uint64_t lo = reps * t / threads, hi = reps * (t + 1) / threads;
    RankStatKernel kernel(n, id);
    std::vector<int> perm(n);
    auto& out = shards[t];
    out.reserve(hi - lo);
    for (std::uint64_t r = lo; r < hi; ++r) {
      Rng rng = Rng::substream(seed, r);
      std::iota(perm.begin(), perm.end(), 1);
      rng.shuffle(perm);
      out.push_back(kernel.from_ranks(perm) * scale);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  std::vector<double> draws;
  draws.reserve(reps);
  for (auto& s : shards) {
    draws.insert(draws.end(), s.begin(), s.end());
    s.clear();
    s.shrink_to_fit();
  }

  NullDistribution dist;
  dist.kind = NullKind::monte_carlo;
  dist.statistic = id;
  dist.n = n;
  dist.seed = seed;
  compress_into(dist, draws);
  return dist;
}

double AsymptoticLaw::cdf(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("AsymptoticLaw::cdf: t must be > 0");
  if (t <= 1.0) return 0.0;  // the running averages have liminf 1

  // Exact terms first. In the quantile region (t >= 1.2 or so) the terms
  // fall below tolerance well inside the cap and the sum below is the whole
  // story. Close to t = 1 the decay rate (t - 1 - log t)/2 collapses and
  // millions of terms would be needed, so past the cap the remaining tail
  // is continued as an integral over a continuous degrees-of-freedom
  // parameter (Euler-Maclaurin leading term with the saddlepoint tail).
  const std::size_t cap = std::max<std::size_t>(series_cutoff, 4096);
  double sum = 0.0;
  bool converged = false;
  for (std::size_t j = 1; j <= cap; ++j) {
    double x = static_cast<double>(j) * t;
    double p = (j <= 512)
                   ? special::chi2_tail(static_cast<unsigned>(j), x)
                   : special::chi2_tail_saddlepoint(static_cast<double>(j), x);
    double term = p / static_cast<double>(j);
    sum += term;
    if (sum > 60.0) return 0.0;
    if (term < tolerance && j >= 4) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    const double rate = 0.5 * (t - 1.0 - std::log(t));
    double lo = static_cast<double>(cap) + 0.5;
    double hi = std::max(2.0 * lo, 45.0 / rate);  // tail prob ~ 1e-20 there
    sum += special::integrate(
        [t](double x) { return special::chi2_tail_saddlepoint(x, x * t) / x; },
        lo, hi, 1e-10);
    if (sum > 60.0) return 0.0;
  }
  return std::exp(-sum);
}

double AsymptoticLaw::tail(double t) const { return 1.0 - cdf(t); }

double AsymptoticLaw::quantile(double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("AsymptoticLaw::quantile: alpha must be in (0,1)");
  const double target = 1.0 - alpha;
  double lo = 1.0, hi = 4.0;
  while (cdf(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6)
      throw std::runtime_error("AsymptoticLaw::quantile: bracket failed");
  }
  while (hi - lo > 1e-6) {
    double mid = 0.5 * (lo + hi);
    if (cdf(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double p_value(const TestOutcome& outcome, const NullDistribution& null_dist) {
  if (null_dist.statistic.method != outcome.method)
    throw std::invalid_argument("p_value: null distribution was built for " +
                                null_dist.statistic.id() + ", outcome is " +
                                method_name(outcome.method));
  double observed =
      outcome.statistic * table_scale_factor(outcome.method, null_dist.n);
  return null_dist.tail_probability(observed);
}

double p_value(const TestOutcome& outcome, const AsymptoticLaw& law) {
  if (outcome.method != Method::os_rank && outcome.method != Method::os_raw)
    throw std::invalid_argument(
        "p_value: the asymptotic law covers the order-selection statistics "
        "only");
  if (outcome.statistic <= 0.0) return 1.0;
  return law.tail(outcome.statistic);
}

std::vector<double> bayes_limit_sample(std::uint64_t reps,
                                       std::size_t truncation,
                                       std::uint64_t seed) {
  if (reps < 1) throw std::invalid_argument("bayes_limit_sample: reps >= 1");
  if (truncation < 1)
    throw std::invalid_argument("bayes_limit_sample: truncation >= 1");
  std::vector<double> draws(reps);
  for (std::uint64_t r = 0; r < reps; ++r) {
    Rng rng = Rng::substream(seed, r);
    double sum = 0.0;
    for (std::size_t j = 1; j <= truncation; ++j) {
      double z = rng.normal();
      sum += std::exp(0.5 * z * z) / (static_cast<double>(j) * j);
    }
    draws[r] = sum;
  }
  std::sort(draws.begin(), draws.end());
  return draws;
}

Calibration default_calibration(std::size_t n) {
  if (n <= 10) return Calibration::exact;
  if (n < 50) return Calibration::monte_carlo;
  return Calibration::asymptotic;
}

void write_null_table(const NullDistribution& dist, std::ostream& os) {
  os << "# rankos.null_table.v1\n";
  os << "method,n,kind,reps,seed,threshold,tail_prob\n";
  char buf[64];
  for (std::size_t i = 0; i < dist.values.size(); ++i) {
    os << dist.statistic.id() << ',' << dist.n << ','
       << null_kind_name(dist.kind) << ',' << dist.total << ',' << dist.seed
       << ',';
    std::snprintf(buf, sizeof buf, "%.17g", dist.values[i]);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g",
                  static_cast<double>(dist.tail_counts[i]) /
                      static_cast<double>(dist.total));
    os << buf << '\n';
  }
}

NullDistribution read_null_table(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "# rankos.null_table.v1")
    throw std::runtime_error("read_null_table: missing schema stamp");
  if (!std::getline(is, line) ||
      line != "method,n,kind,reps,seed,threshold,tail_prob")
    throw std::runtime_error("read_null_table: unexpected header");

  NullDistribution dist;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string method, n_s, kind, reps_s, seed_s, thr_s, tp_s;
    if (!std::getline(ss, method, ',') || !std::getline(ss, n_s, ',') ||
        !std::getline(ss, kind, ',') || !std::getline(ss, reps_s, ',') ||
        !std::getline(ss, seed_s, ',') || !std::getline(ss, thr_s, ',') ||
        !std::getline(ss, tp_s, ','))
      throw std::runtime_error("read_null_table: malformed row: " + line);
    if (first) {
      dist.statistic = StatisticId::from_id(method);
      dist.n = static_cast<std::size_t>(std::stoul(n_s));
      dist.kind = (kind == "exact") ? NullKind::exact : NullKind::monte_carlo;
      dist.total = std::stoull(reps_s);
      dist.seed = std::stoull(seed_s);
      first = false;
    }
    double thr = std::stod(thr_s);
    double tp = std::stod(tp_s);
    dist.values.push_back(thr);
    dist.tail_counts.push_back(static_cast<std::uint64_t>(
        std::llround(tp * static_cast<double>(dist.total))));
  }
  if (first) throw std::runtime_error("read_null_table: no rows");
  if (!std::is_sorted(dist.values.begin(), dist.values.end()))
    throw std::runtime_error("read_null_table: thresholds not ascending");
  return dist;
}

}  // namespace rankos
