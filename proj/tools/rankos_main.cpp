// rankos: rank-based lack-of-fit tests for regression, with exact, Monte
// Carlo and asymptotic calibration, series smooths, and a power/efficiency
// laboratory. See README.md for the file formats and exit-status contract.

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankos/calibrate.hpp"
#include "rankos/dataset.hpp"
#include "rankos/errors.hpp"
#include "rankos/laws.hpp"
#include "rankos/linmod.hpp"
#include "rankos/power.hpp"
#include "rankos/smooth.hpp"
#include "rankos/special.hpp"
#include "rankos/stats.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kTies = 2,
  kDegenerate = 3,
  kCapacity = 4,
  kUnsupportedLaw = 5,
  kSeedRequired = 6,
  kOverflow = 7,
  kSingularDesign = 8,
};

int emit_error(const std::string& code, const std::string& message,
               int status, const json& extra = json::object()) {
  json doc = {{"schema", "rankos.error.v1"},
              {"error", code},
              {"message", message},
              {"exit_status", status}};
  for (auto& [k, v] : extra.items()) doc[k] = v;
  std::cout << doc.dump(2) << std::endl;
  return status;
}

bool interactive() { return isatty(STDOUT_FILENO) != 0; }

// Every random operation sits behind --seed. In scripted runs a missing
// seed is an error; interactively one is drawn and reported.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed,
                           bool& generated) {
  if (seed) {
    generated = false;
    return *seed;
  }
  if (!interactive())
    throw std::invalid_argument(
        "--seed is required in non-interactive runs (reproducibility)");
  generated = true;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

rankos::TiePolicy parse_tie_policy(const std::string& s) {
  if (s == "reject") return rankos::TiePolicy::reject;
  if (s == "midrank") return rankos::TiePolicy::midrank;
  throw std::invalid_argument("tie policy must be reject or midrank");
}

rankos::LinearModelBasis parse_builtin_basis(const std::string& name,
                                             std::size_t n) {
  if (name == "constant") return rankos::LinearModelBasis::constant(n);
  if (name == "linear") return rankos::LinearModelBasis::polynomial(n, 1);
  if (name.rfind("poly:", 0) == 0)
    return rankos::LinearModelBasis::polynomial(
        n, std::stoul(name.substr(5)));
  if (name.rfind("cos:", 0) == 0)
    return rankos::LinearModelBasis::cosine(n, std::stoul(name.substr(4)));
  throw std::invalid_argument(
      "basis must be constant, linear, poly:K or cos:K");
}

rankos::LinearModelBasis load_basis_file(const std::string& path,
                                         std::size_t n) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open basis file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    rows.push_back(std::move(row));
  }
  if (rows.size() != n)
    throw std::runtime_error("basis file has " + std::to_string(rows.size()) +
                             " rows, dataset has " + std::to_string(n));
  std::size_t p = rows.front().size();
  std::vector<std::vector<double>> cols(p, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != p)
      throw std::runtime_error("basis file is ragged at row " +
                               std::to_string(i + 1));
    for (std::size_t j = 0; j < p; ++j) cols[j][i] = rows[i][j];
  }
  return rankos::LinearModelBasis::from_columns(std::move(cols));
}

// Null table construction with an optional on-disk cache keyed by
// (method, n, kind, reps, seed).
rankos::NullDistribution build_null(std::size_t n, rankos::StatisticId id,
                                    rankos::Calibration kind,
                                    std::uint64_t reps, std::uint64_t seed,
                                    std::size_t enum_cap, unsigned threads,
                                    const std::string& cache_dir,
                                    std::string* provenance_path) {
  std::string cache_path;
  if (!cache_dir.empty()) {
    std::ostringstream name;
    name << id.id() << "_n" << n;
    if (kind == rankos::Calibration::exact)
      name << "_exact";
    else
      name << "_mc_r" << reps << "_s" << seed;
    name << ".csv";
    cache_path = (fs::path(cache_dir) / name.str()).string();
    if (fs::exists(cache_path)) {
      std::ifstream f(cache_path);
      rankos::NullDistribution dist = rankos::read_null_table(f);
      if (provenance_path) *provenance_path = cache_path;
      return dist;
    }
  }
  rankos::NullDistribution dist =
      (kind == rankos::Calibration::exact)
          ? rankos::exact_null(n, id, enum_cap)
          : rankos::monte_carlo_null(n, id, reps, seed, threads);
  if (!cache_path.empty()) {
    fs::create_directories(cache_dir);
    std::ofstream f(cache_path);
    rankos::write_null_table(dist, f);
    if (provenance_path) *provenance_path = cache_path;
  }
  return dist;
}

json outcome_to_json(const rankos::TestOutcome& outcome, std::size_t n,
                     const rankos::Dataset& data, const json& provenance) {
  json doc = {
      {"schema", "rankos.test_outcome.v1"},
      {"method", rankos::method_name(outcome.method)},
      {"statistic", outcome.statistic},
      {"selected_order", outcome.selected_order},
      {"calibration", rankos::calibration_name(outcome.calibration)},
      {"tie_caveat", outcome.tie_caveat},
      {"residual_caveat", outcome.residual_caveat},
      {"n", n},
      {"input_digest", data.digest},
      {"x_projected", data.x_projected},
      {"calibration_provenance", provenance},
  };
  doc["p_value"] = outcome.p_value ? json(*outcome.p_value) : json(nullptr);
  doc["seed"] = outcome.seed ? json(*outcome.seed) : json(nullptr);
  return doc;
}

int cmd_test(const std::string& input, const std::string& method_s,
             std::size_t order, const std::string& calibration_s,
             std::uint64_t reps, std::optional<std::uint64_t> seed_opt,
             const std::string& tie_policy_s, std::size_t enum_cap,
             const std::string& cache_dir, unsigned threads,
             const std::string& basis_s, const std::string& basis_file) {
  rankos::Dataset data = rankos::load_dataset_file(input);
  const std::size_t n = data.y.size();
  rankos::DesignedSample sample(data.y);
  rankos::TiePolicy policy = parse_tie_policy(tie_policy_s);

  rankos::StatisticId id;
  id.method = rankos::method_from_name(method_s);
  id.order = order;
  if (id.method == rankos::Method::neyman_fixed && (order < 1 || order > n - 1))
    throw std::invalid_argument("neyman_fixed needs --order in [1, n-1]");

  rankos::Calibration calib;
  if (calibration_s == "auto") {
    calib = rankos::default_calibration(n);
    if (id.method == rankos::Method::os_raw)
      calib = rankos::Calibration::asymptotic;
    else if (calib == rankos::Calibration::asymptotic &&
             id.method != rankos::Method::os_rank &&
             id.method != rankos::Method::neyman_fixed)
      calib = rankos::Calibration::monte_carlo;  // no asymptotic law to use
  } else if (calibration_s == "exact") {
    calib = rankos::Calibration::exact;
  } else if (calibration_s == "monte_carlo") {
    calib = rankos::Calibration::monte_carlo;
  } else if (calibration_s == "asymptotic") {
    calib = rankos::Calibration::asymptotic;
  } else {
    throw std::invalid_argument("calibration must be auto, exact, monte_carlo "
                                "or asymptotic");
  }

  // residual path when a null-model basis is given
  std::optional<rankos::ResidualSample> resid;
  if (!basis_s.empty() || !basis_file.empty()) {
    rankos::LinearModelBasis basis = !basis_file.empty()
                                         ? load_basis_file(basis_file, n)
                                         : parse_builtin_basis(basis_s, n);
    resid = rankos::least_squares_fit(sample, basis);
  }

  bool seed_generated = false;
  std::uint64_t seed = 0;
  if (calib == rankos::Calibration::monte_carlo)
    seed = resolve_seed(seed_opt, seed_generated);

  rankos::TestOutcome outcome;
  if (id.method == rankos::Method::os_raw) {
    if (calib != rankos::Calibration::asymptotic)
      throw std::invalid_argument(
          "os_raw supports asymptotic calibration only (its permutation null "
          "depends on the data)");
    if (resid) {
      rankos::CalibrationChoice choice{calib, reps, seed, enum_cap, threads};
      outcome = rankos::residual_raw_os_test(*resid, choice);
    } else {
      double sigma_sq = rankos::variance_estimate(sample);
      if (!(sigma_sq > 0.0))
        throw rankos::DegenerateDataError(
            "constant responses: variance estimate is zero");
      rankos::CoefficientVector coeffs =
          rankos::cosine_coefficients(sample.y, rankos::CoeffSource::raw);
      outcome = rankos::os_statistic(coeffs, sigma_sq);
      outcome.p_value = rankos::p_value(outcome, rankos::AsymptoticLaw{});
      outcome.calibration = rankos::Calibration::asymptotic;
    }
    json prov = {{"kind", "asymptotic"}};
    std::cout << outcome_to_json(outcome, n, data, prov).dump(2) << std::endl;
    return kOk;
  }

  // rank statistics
  const std::vector<double>& test_values = resid ? resid->residuals : sample.y;
  rankos::UniformScores scores = rankos::rank_scores(test_values, policy);
  switch (id.method) {
    case rankos::Method::os_rank:
      outcome = rankos::rank_os_statistic(scores);
      break;
    case rankos::Method::neyman_rank_mallows:
      outcome = rankos::data_driven_neyman(scores, rankos::PenaltyKind::mallows);
      break;
    case rankos::Method::neyman_rank_bic:
      outcome = rankos::data_driven_neyman(scores, rankos::PenaltyKind::bic);
      break;
    case rankos::Method::bayes_rank:
      outcome = rankos::bayes_statistic(scores);
      break;
    case rankos::Method::neyman_fixed: {
      rankos::CoefficientVector coeffs = rankos::cosine_coefficients(
          scores.u,
          resid ? rankos::CoeffSource::residual_rank : rankos::CoeffSource::rank);
      outcome.method = rankos::Method::neyman_fixed;
      outcome.statistic = rankos::neyman_statistic(coeffs, 1.0 / 12.0, order);
      outcome.selected_order = order;
      outcome.tie_caveat = scores.had_ties;
      break;
    }
    default:
      throw std::invalid_argument("unreachable method");
  }
  if (resid) outcome.residual_caveat = true;

  json prov;
  switch (calib) {
    case rankos::Calibration::asymptotic: {
      if (id.method == rankos::Method::os_rank) {
        outcome.p_value = rankos::p_value(outcome, rankos::AsymptoticLaw{});
      } else if (id.method == rankos::Method::neyman_fixed) {
        outcome.p_value = rankos::special::chi2_tail(
            static_cast<unsigned>(order), outcome.statistic);
      } else {
        throw std::invalid_argument("no asymptotic law for " + method_s +
                                    "; use exact or monte_carlo");
      }
      outcome.calibration = rankos::Calibration::asymptotic;
      prov = {{"kind", "asymptotic"}};
      break;
    }
    case rankos::Calibration::exact:
    case rankos::Calibration::monte_carlo: {
      std::string table_path;
      rankos::NullDistribution dist =
          build_null(n, id, calib, reps, seed, enum_cap, threads, cache_dir,
                     &table_path);
      outcome.p_value = rankos::p_value(outcome, dist);
      outcome.calibration = calib;
      prov = {{"kind", rankos::calibration_name(calib)},
              {"total", dist.total}};
      if (calib == rankos::Calibration::monte_carlo) {
        outcome.seed = seed;
        prov["reps"] = reps;
        prov["seed"] = seed;
        prov["seed_generated"] = seed_generated;
      }
      if (!table_path.empty()) prov["table"] = table_path;
      break;
    }
    case rankos::Calibration::none:
      break;
  }

  std::cout << outcome_to_json(outcome, n, data, prov).dump(2) << std::endl;
  return kOk;
}

int cmd_null_table(std::size_t n, const std::string& method_s,
                   std::size_t order, const std::string& kind_s,
                   std::uint64_t reps, std::optional<std::uint64_t> seed_opt,
                   std::size_t enum_cap, unsigned threads,
                   const std::string& out_path) {
  rankos::StatisticId id;
  id.method = rankos::method_from_name(method_s);
  id.order = order;

  rankos::NullDistribution dist;
  if (kind_s == "exact") {
    dist = rankos::exact_null(n, id, enum_cap);
  } else if (kind_s == "monte_carlo") {
    bool generated = false;
    std::uint64_t seed = resolve_seed(seed_opt, generated);
    dist = rankos::monte_carlo_null(n, id, reps, seed, threads);
  } else {
    throw std::invalid_argument("kind must be exact or monte_carlo");
  }

  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot write " + out_path);
  rankos::write_null_table(dist, f);

  json doc = {{"schema", "rankos.null_table_summary.v1"},
              {"out", out_path},
              {"method", id.id()},
              {"n", n},
              {"kind", rankos::null_kind_name(dist.kind)},
              {"total", dist.total},
              {"distinct_values", dist.values.size()}};
  if (dist.kind == rankos::NullKind::monte_carlo) doc["seed"] = dist.seed;
  std::cout << doc.dump(2) << std::endl;
  return kOk;
}

int cmd_smooth(const std::string& input, double A, const std::string& out_path,
               bool independent, const std::string& tie_policy_s,
               std::size_t grid) {
  rankos::Dataset data = rankos::load_dataset_file(input);
  rankos::DesignedSample sample(data.y);
  rankos::PairedSmooth pair = rankos::paired_smooth(
      sample, A, independent, parse_tie_policy(tie_policy_s));

  // both curves centered to mean zero over the design points
  const std::size_t n = sample.n();
  double raw_mean = 0.0, rank_mean = 0.0;
  for (double v : pair.raw.fitted) raw_mean += v;
  for (double v : pair.rank.fitted) rank_mean += v;
  raw_mean /= static_cast<double>(n);
  rank_mean /= static_cast<double>(n);

  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot write " + out_path);
  f << "x,fitted_raw_scaled,fitted_rank_scaled\n";
  char buf[160];
  if (grid == 0) {
    std::vector<double> x = rankos::design_grid(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x[i],
                    pair.raw.fitted[i] - raw_mean,
                    pair.rank.fitted[i] - rank_mean);
      f << buf;
    }
  } else {
    for (std::size_t i = 0; i < grid; ++i) {
      double x = (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x,
                    pair.raw.evaluate(x) - raw_mean,
                    pair.rank.evaluate(x) - rank_mean);
      f << buf;
    }
  }

  json doc = {{"schema", "rankos.smooth_summary.v1"},
              {"out", out_path},
              {"n", n},
              {"m_raw", pair.raw.m},
              {"m_rank", pair.rank.m},
              {"sigma_hat", pair.sigma_hat},
              {"A", A},
              {"centered", true},
              {"input_digest", data.digest}};
  std::cout << doc.dump(2) << std::endl;
  return kOk;
}

int cmd_power(const std::string& law_s, const std::string& shape_s,
              const std::string& c_list_s, std::size_t n, double alpha,
              const std::string& method_s, const std::string& calibration_s,
              std::uint64_t reps, std::uint64_t limit_reps,
              std::size_t truncation, std::optional<std::uint64_t> seed_opt,
              unsigned threads, const std::string& out_path) {
  rankos::ErrorLaw law = rankos::ErrorLaw::parse(law_s);
  if (shape_s.rfind("cos:", 0) != 0)
    throw std::invalid_argument("shape must be cos:K");
  unsigned k = static_cast<unsigned>(std::stoul(shape_s.substr(4)));

  rankos::StatisticId id;
  id.method = rankos::method_from_name(method_s);
  if (id.method != rankos::Method::os_rank &&
      id.method != rankos::Method::os_raw)
    throw std::invalid_argument(
        "power curves cover the order-selection tests (os_rank, os_raw)");

  rankos::Calibration calib;
  if (calibration_s == "asymptotic") calib = rankos::Calibration::asymptotic;
  else if (calibration_s == "exact") calib = rankos::Calibration::exact;
  else if (calibration_s == "monte_carlo") calib = rankos::Calibration::monte_carlo;
  else throw std::invalid_argument("calibration must be exact, monte_carlo or asymptotic");

  std::vector<double> cs;
  {
    std::stringstream ss(c_list_s);
    std::string tok;
    while (std::getline(ss, tok, ',')) cs.push_back(std::stod(tok));
    if (cs.empty()) throw std::invalid_argument("empty --c-list");
  }

  bool generated = false;
  std::uint64_t seed = resolve_seed(seed_opt, generated);

  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot write " + out_path);
  f << "c,empirical_power,limiting_power,std_error\n";

  json rows = json::array();
  for (double c : cs) {
    rankos::LocalAlternativeSpec spec =
        rankos::LocalAlternativeSpec::cosine_shape(c, k, law);
    rankos::CalibrationChoice choice{calib, reps, seed ^ 0x9e3779b9u, 10,
                                     threads};
    rankos::PowerEstimate emp =
        rankos::empirical_power(spec, n, id, alpha, choice, reps, seed, threads);
    rankos::PowerEstimate lim =
        (id.method == rankos::Method::os_rank)
            ? rankos::limiting_power_rank(spec, alpha, truncation, limit_reps,
                                          seed + 1, threads)
            : rankos::limiting_power_raw(spec, alpha, truncation, limit_reps,
                                         seed + 1, threads);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", c, emp.value,
                  lim.value, emp.std_error);
    f << buf;
    rows.push_back({{"c", c},
                    {"empirical_power", emp.value},
                    {"empirical_std_error", emp.std_error},
                    {"limiting_power", lim.value},
                    {"limiting_std_error", lim.std_error}});
  }

  json doc = {{"schema", "rankos.power_summary.v1"},
              {"out", out_path},
              {"law", law.name()},
              {"shape", shape_s},
              {"n", n},
              {"alpha", alpha},
              {"method", method_s},
              {"seed", seed},
              {"seed_generated", generated},
              {"rows", rows}};
  std::cout << doc.dump(2) << std::endl;
  return kOk;
}

int cmd_are(const std::string& law_s, std::size_t pitman_n) {
  rankos::ErrorLaw law = rankos::ErrorLaw::parse(law_s);
  rankos::AreReport rep = rankos::are_report(law);
  json doc = {{"schema", "rankos.are.v1"},
              {"law", law.name()},
              {"closed_form", rep.closed_form},
              {"quadrature", rep.quadrature},
              {"value", rep.value},
              {"abs_difference", std::fabs(rep.closed_form - rep.quadrature)}};
  if (pitman_n > 0) {
    // matched sample size: the rank test needs about n/efficiency
    // observations to match the raw test run on n observations
    doc["pitman_n"] = pitman_n;
    doc["matched_rank_n"] = static_cast<std::uint64_t>(
        std::floor(static_cast<double>(pitman_n) / rep.value));
  }
  std::cout << doc.dump(2) << std::endl;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rank-based lack-of-fit tests on the midpoint design"};
  app.require_subcommand(1);

  // test
  auto* test = app.add_subcommand("test", "run a lack-of-fit test on a CSV dataset");
  std::string t_input, t_method = "os_rank", t_calib = "auto",
              t_policy = "reject", t_cache, t_basis, t_basis_file;
  std::size_t t_order = 0, t_cap = 10;
  std::uint64_t t_reps = 100000;
  std::optional<std::uint64_t> t_seed;
  unsigned t_threads = 1;
  test->add_option("input", t_input, "CSV file with a y column (x optional)")
      ->required();
  test->add_option("--method", t_method,
                   "os_rank|os_raw|neyman_fixed|neyman_rank_mallows|"
                   "neyman_rank_bic|bayes_rank");
  test->add_option("--order", t_order, "order for neyman_fixed");
  test->add_option("--calibration", t_calib, "auto|exact|monte_carlo|asymptotic");
  test->add_option("--reps", t_reps, "Monte Carlo replicates");
  test->add_option("--seed", t_seed, "RNG seed (required for Monte Carlo in scripts)");
  test->add_option("--tie-policy", t_policy, "reject|midrank");
  test->add_option("--enum-cap", t_cap, "exact enumeration cap (acknowledges n! cost)");
  test->add_option("--cache-dir", t_cache, "null-table cache directory");
  test->add_option("--threads", t_threads, "worker threads (never changes results)");
  test->add_option("--linear-basis", t_basis,
                   "test fit of a null model: constant|linear|poly:K|cos:K");
  test->add_option("--basis-file", t_basis_file,
                   "null-model basis as CSV matrix (n rows, p columns)");

  // null-table
  auto* table = app.add_subcommand("null-table", "build and save a null table");
  std::size_t nt_n = 0, nt_order = 0, nt_cap = 10;
  std::string nt_method = "os_rank", nt_kind = "exact", nt_out;
  std::uint64_t nt_reps = 100000;
  std::optional<std::uint64_t> nt_seed;
  unsigned nt_threads = 1;
  table->add_option("--n", nt_n, "sample size")->required();
  table->add_option("--method", nt_method, "rank statistic id");
  table->add_option("--order", nt_order, "order for neyman_fixed");
  table->add_option("--kind", nt_kind, "exact|monte_carlo");
  table->add_option("--reps", nt_reps, "Monte Carlo replicates");
  table->add_option("--seed", nt_seed, "RNG seed");
  table->add_option("--enum-cap", nt_cap, "exact enumeration cap");
  table->add_option("--threads", nt_threads, "worker threads");
  table->add_option("--out", nt_out, "output CSV path")->required();

  // smooth
  auto* smooth = app.add_subcommand("smooth", "paired raw/rank series smooths");
  std::string s_input, s_out, s_policy = "reject";
  double s_A = 4.18;
  bool s_indep = false;
  std::size_t s_grid = 0;
  smooth->add_option("input", s_input, "CSV dataset")->required();
  smooth->add_option("--A", s_A, "criterion penalty constant");
  smooth->add_option("--out", s_out, "output CSV path")->required();
  smooth->add_flag("--independent-truncation", s_indep,
                   "select the rank truncation separately");
  smooth->add_option("--tie-policy", s_policy, "reject|midrank");
  smooth
      ->add_option("--grid", s_grid,
                   "emit a uniform plotting grid instead of the design "
                   "points; density defaults to 512")
      ->expected(0, 1)
      ->default_str("512");

  // power
  auto* power = app.add_subcommand("power", "empirical and limiting power curves");
  std::string p_law = "normal", p_shape = "cos:1", p_cs = "0,1,2,4",
              p_method = "os_rank", p_calib = "asymptotic", p_out;
  std::size_t p_n = 100, p_trunc = 500;
  double p_alpha = 0.05;
  std::uint64_t p_reps = 2000, p_limit_reps = 20000;
  std::optional<std::uint64_t> p_seed;
  unsigned p_threads = 1;
  power->add_option("--law", p_law, "error law, e.g. normal, t:5, laplace");
  power->add_option("--shape", p_shape, "signal shape cos:K");
  power->add_option("--c-list", p_cs, "comma-separated signal multipliers");
  power->add_option("--n", p_n, "sample size for the empirical side");
  power->add_option("--alpha", p_alpha, "test level");
  power->add_option("--method", p_method, "os_rank|os_raw");
  power->add_option("--calibration", p_calib, "empirical-side calibration");
  power->add_option("--reps", p_reps, "empirical replicates");
  power->add_option("--limit-reps", p_limit_reps, "limiting-law replicates");
  power->add_option("--truncation", p_trunc, "limiting-law series truncation");
  power->add_option("--seed", p_seed, "RNG seed");
  power->add_option("--threads", p_threads, "worker threads");
  power->add_option("--out", p_out, "output CSV path")->required();

  // are
  auto* are_cmd = app.add_subcommand(
      "are", "asymptotic relative efficiency of the rank test");
  std::string a_law;
  std::size_t a_pitman_n = 0;
  are_cmd->add_option("--law", a_law, "error law")->required();
  are_cmd->add_option("--pitman-n", a_pitman_n,
                      "also report the rank-test sample size matching a "
                      "raw-data test of this size");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*test)
      return cmd_test(t_input, t_method, t_order, t_calib, t_reps, t_seed,
                      t_policy, t_cap, t_cache, t_threads, t_basis,
                      t_basis_file);
    if (*table)
      return cmd_null_table(nt_n, nt_method, nt_order, nt_kind, nt_reps,
                            nt_seed, nt_cap, nt_threads, nt_out);
    if (*smooth)
      return cmd_smooth(s_input, s_A, s_out, s_indep, s_policy, s_grid);
    if (*power)
      return cmd_power(p_law, p_shape, p_cs, p_n, p_alpha, p_method, p_calib,
                       p_reps, p_limit_reps, p_trunc, p_seed, p_threads,
                       p_out);
    if (*are_cmd) return cmd_are(a_law, a_pitman_n);
  } catch (const rankos::TiesError& e) {
    return emit_error("ties", e.what(), kTies);
  } catch (const rankos::DegenerateDataError& e) {
    return emit_error("degenerate_data", e.what(), kDegenerate);
  } catch (const rankos::CapacityError& e) {
    return emit_error("capacity", e.what(), kCapacity);
  } catch (const rankos::UnsupportedLawError& e) {
    return emit_error("unsupported_law", e.what(), kUnsupportedLaw);
  } catch (const rankos::OverflowError& e) {
    return emit_error("overflow", e.what(), kOverflow,
                      {{"log_statistic", e.log_value}});
  } catch (const rankos::SingularDesignError& e) {
    return emit_error("singular_design", e.what(), kSingularDesign);
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    if (msg.find("--seed is required") != std::string::npos)
      return emit_error("seed_required", msg, kSeedRequired);
    return emit_error("usage", msg, kUsage);
  } catch (const std::exception& e) {
    return emit_error("usage", e.what(), kUsage);
  }
  return kUsage;
}
