#include "rankreg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include "rankreg/calibration.hpp"
#include "rankreg/estimator.hpp"
#include "rankreg/io.hpp"

namespace rankreg {
namespace {

// Stream tags; arbitrary but fixed forever, since they define the data.
constexpr std::uint64_t kTruthTag = 0x7472757468ULL;
constexpr std::uint64_t kSamplesTag = 0x73616d706c6573ULL;
constexpr std::uint64_t kComparisonsTag = 0x636f6d7061726573ULL;

std::string describe(const TrialConfig& c, int repetition) {
  return "d=" + std::to_string(c.d) + " n=" + std::to_string(c.n) + " m=" + std::to_string(c.m) +
         " lambda_min=" + format_double(c.lambda_min) + " target_pe=" + format_double(c.target_pe) +
         " rep=" + std::to_string(repetition);
}

std::string csv_safe(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  std::replace(text.begin(), text.end(), '\r', ' ');
  return text;
}

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::optional<double> parse_optional(const std::string& field, const std::string& source, std::size_t line) {
  if (field.empty()) return std::nullopt;
  return parse_double(field, source, line);
}

bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v); }

struct Moments {
  std::optional<double> mean;
  std::optional<double> std;
};

Moments moments(const std::vector<double>& xs) {
  if (xs.empty()) return {};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double std = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return {mean, std};
}

}  // namespace

void TrialConfig::validate(bool require_estimable) const {
  if (d < 1) throw DomainError("d must be >= 1");
  if (n < 1) throw DomainError("n must be >= 1");
  if (n > static_cast<std::int64_t>(UINT32_MAX)) throw DomainError("n is too large");
  if (m < 1) throw DomainError("m must be >= 1");
  if (!(lambda_min > 0.0 && lambda_min <= 1.0)) throw DomainError("lambda_min must lie in (0, 1]");
  if (!(target_pe >= 0.0 && target_pe < 0.5)) throw DomainError("target_pe must lie in [0, 1/2)");
  if (repetitions < 1) throw DomainError("repetitions must be >= 1");
  if (require_estimable && n <= d + 2) {
    throw DomainError("n must exceed d + 2 (n = " + std::to_string(n) + ", d = " + std::to_string(d) + ")");
  }
}

std::int64_t n_log_n(std::int64_t n) {
  if (n < 1) throw DomainError("n must be >= 1");
  const double v = std::ceil(static_cast<double>(n) * std::log(static_cast<double>(n)));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(v));
}

TrialInstance build_trial_instance(const TrialConfig& config, int repetition) {
  config.validate(false);
  const auto d = static_cast<std::uint64_t>(config.d);
  const std::uint64_t lambda = double_bits(config.lambda_min);
  const auto rep = static_cast<std::uint64_t>(repetition);
  const auto n = static_cast<std::uint64_t>(config.n);

  RngStream truth_rng(config.master_seed, hash_words({kTruthTag, d, lambda, rep}));
  GroundTruth truth = sample_ground_truth(truth_rng, config.d);
  SpdMatrix sigma = make_covariance({config.d, config.lambda_min}, truth_rng);

  LinkFunction link = LinkFunction::deterministic();
  std::optional<double> c1;
  if (config.target_pe > 0.0) {
    const ScoreDifferenceLaw law = score_sigma(truth.beta, sigma);
    link = LinkFunction::logistic(solve_alpha_for_pe(config.target_pe, law));
    c1 = estimate_c1(link, law);
  }
  ModelSpec model{std::move(truth.beta), std::move(truth.mu), std::move(sigma), link};

  RngStream sample_rng(config.master_seed, hash_words({kSamplesTag, d, lambda, rep, n}));
  SampleSet samples = generate_samples(sample_rng, model, config.n);
  RngStream comparison_rng(config.master_seed, hash_words({kComparisonsTag, d, lambda, rep, n}));
  ComparisonDataset comparisons =
      generate_comparisons(comparison_rng, model, samples, static_cast<std::size_t>(config.m));
  return TrialInstance{std::move(model), std::move(samples), std::move(comparisons), c1};
}

TrialError::TrialError(const TrialConfig& config, int repetition, const std::string& what)
    : Error("trial [" + describe(config, repetition) + "] failed: " + what),
      config_(config),
      repetition_(repetition) {}

TrialResult run_trial(const TrialConfig& config, int repetition) {
  const auto start = std::chrono::steady_clock::now();
  try {
    config.validate(true);
    const TrialInstance instance = build_trial_instance(config, repetition);
    const CovarianceEstimate cov = estimate_covariance(instance.samples);
    const Estimate estimate = estimate_beta(instance.comparisons, instance.samples, cov);
    const Metrics metrics = compute_metrics(estimate.beta_hat, instance.model.beta, instance.c1);

    TrialResult result{config, repetition, metrics.norm_error, metrics.angle, instance.c1, 0.0, {}};
    result.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  } catch (const TrialError&) {
    throw;
  } catch (const std::exception& e) {
    throw TrialError(config, repetition, e.what());
  }
}

std::string_view to_string(SweptParameter p) noexcept {
  switch (p) {
    case SweptParameter::n:
      return "n";
    case SweptParameter::m:
      return "m";
    case SweptParameter::d:
      return "d";
    case SweptParameter::lambda_min:
      return "lambda_min";
  }
  return "?";
}

std::string_view to_string(MRule r) noexcept { return r == MRule::fixed ? "fixed" : "n_log_n"; }

std::optional<SweptParameter> parse_swept_parameter(std::string_view text) noexcept {
  for (auto p : {SweptParameter::n, SweptParameter::m, SweptParameter::d, SweptParameter::lambda_min}) {
    if (text == to_string(p)) return p;
  }
  return std::nullopt;
}

std::optional<MRule> parse_m_rule(std::string_view text) noexcept {
  if (text == "fixed") return MRule::fixed;
  if (text == "n_log_n") return MRule::n_log_n;
  return std::nullopt;
}

double swept_value(const TrialConfig& config, SweptParameter parameter) noexcept {
  switch (parameter) {
    case SweptParameter::n:
      return static_cast<double>(config.n);
    case SweptParameter::m:
      return static_cast<double>(config.m);
    case SweptParameter::d:
      return static_cast<double>(config.d);
    case SweptParameter::lambda_min:
      return config.lambda_min;
  }
  return 0.0;
}

TrialConfig SweepSpec::config_at(double value) const {
  TrialConfig c = base;
  switch (parameter) {
    case SweptParameter::n:
      c.n = static_cast<std::int64_t>(value);
      break;
    case SweptParameter::m:
      c.m = static_cast<std::int64_t>(value);
      break;
    case SweptParameter::d:
      c.d = static_cast<int>(value);
      break;
    case SweptParameter::lambda_min:
      c.lambda_min = value;
      break;
  }
  if (m_rule == MRule::n_log_n) c.m = n_log_n(c.n);
  return c;
}

void SweepSpec::validate() const {
  if (grid.empty()) throw DomainError("sweep grid is empty");
  if (parameter == SweptParameter::m && m_rule == MRule::n_log_n) {
    throw DomainError("cannot sweep m while m_rule is n_log_n");
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k > 0 && !(grid[k] > grid[k - 1])) throw DomainError("sweep grid must be strictly increasing");
    if (parameter != SweptParameter::lambda_min && (!is_integral(grid[k]) || grid[k] < 1.0 || grid[k] > 4e18)) {
      throw DomainError("grid values for " + std::string(to_string(parameter)) + " must be positive integers");
    }
    config_at(grid[k]).validate(true);
  }
}

std::vector<Aggregate> aggregate(SweptParameter parameter, const std::vector<double>& grid,
                                 const std::vector<TrialResult>& rows) {
  std::vector<Aggregate> out;
  out.reserve(grid.size());
  for (double value : grid) {
    std::vector<double> norms;
    std::vector<double> angles;
    int count = 0;
    for (const TrialResult& row : rows) {
      if (!row.ok() || swept_value(row.config, parameter) != value) continue;
      ++count;
      if (row.norm_error) norms.push_back(*row.norm_error);
      if (row.angle) angles.push_back(*row.angle);
    }
    const Moments nm = moments(norms);
    const Moments am = moments(angles);
    out.push_back(Aggregate{value, nm.mean, am.mean, nm.std, am.std, count});
  }
  return out;
}

SweepResult run_sweep(const SweepSpec& spec, const RunOptions& options) {
  spec.validate();
  const int reps = spec.base.repetitions;
  const std::size_t total = spec.grid.size() * static_cast<std::size_t>(reps);

  SweepResult result{spec.parameter, spec.grid, std::vector<TrialResult>(total), {}};
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      const TrialConfig config = spec.config_at(spec.grid[task / reps]);
      const int rep = static_cast<int>(task % reps);
      try {
        result.rows[task] = run_trial(config, rep);
      } catch (const std::exception& e) {
        TrialResult failed;
        failed.config = config;
        failed.repetition = rep;
        failed.error = e.what();
        result.rows[task] = std::move(failed);
      }
    }
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  result.aggregates = aggregate(spec.parameter, spec.grid, result.rows);
  return result;
}

void MinNQuery::validate() const {
  if (!(angle_threshold > 0.0 && angle_threshold <= std::numbers::pi)) {
    throw DomainError("angle threshold must lie in (0, pi]");
  }
  if (n_grid.empty()) throw DomainError("n grid is empty");
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    if (k > 0 && n_grid[k] <= n_grid[k - 1]) throw DomainError("n grid must be strictly increasing");
    TrialConfig c = base;
    c.n = n_grid[k];
    c.m = n_log_n(std::max<std::int64_t>(1, c.n));
    c.validate(true);
  }
}

MinNResult find_min_n(const MinNQuery& query, const RunOptions& options) {
  query.validate();
  MinNResult out;
  out.evaluated.parameter = SweptParameter::n;
  for (std::int64_t n : query.n_grid) {
    SweepSpec point{query.base, SweptParameter::n, {static_cast<double>(n)}, MRule::n_log_n};
    SweepResult r = run_sweep(point, options);
    out.evaluated.grid.push_back(static_cast<double>(n));
    for (auto& row : r.rows) out.evaluated.rows.push_back(std::move(row));
    out.evaluated.aggregates.push_back(r.aggregates.front());
    const auto& mean_angle = r.aggregates.front().angle_mean;
    if (mean_angle && *mean_angle <= query.angle_threshold) {
      out.n = n;
      break;
    }
  }
  return out;
}

std::string trials_to_csv(const SweepResult& result, const WriteOptions& options) {
  std::string out = "d,n,m,lambda_min,target_pe,rep,norm_error,angle,c1,wall_time_s,error\n";
  for (const TrialResult& r : result.rows) {
    const TrialConfig& c = r.config;
    out += std::to_string(c.d) + ',' + std::to_string(c.n) + ',' + std::to_string(c.m) + ',' +
           format_double(c.lambda_min) + ',' + format_double(c.target_pe) + ',' + std::to_string(r.repetition) +
           ',' + optional_field(r.norm_error) + ',' + optional_field(r.angle) + ',' + optional_field(r.c1) + ',';
    if (options.include_wall_time && r.ok()) out += format_double(r.wall_time_seconds);
    out += ',' + csv_safe(r.error) + '\n';
  }
  return out;
}

std::string aggregates_to_csv(const SweepResult& result) {
  std::string out(to_string(result.parameter));
  out += ",norm_error_mean,angle_mean,norm_error_std,angle_std,count\n";
  for (const Aggregate& a : result.aggregates) {
    out += format_double(a.value) + ',' + optional_field(a.norm_error_mean) + ',' + optional_field(a.angle_mean) +
           ',' + optional_field(a.norm_error_std) + ',' + optional_field(a.angle_std) + ',' +
           std::to_string(a.count) + '\n';
  }
  return out;
}

void write_results(const SweepResult& result, const std::filesystem::path& prefix, const WriteOptions& options) {
  const std::string base = prefix.string();
  write_text_file(base + ".trials.csv", trials_to_csv(result, options));
  write_text_file(base + ".agg.csv", aggregates_to_csv(result));
}

std::vector<TrialResult> read_trials_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  static const std::vector<std::string> kHeader{"d",     "n",  "m",           "lambda_min", "target_pe", "rep",
                                                "norm_error", "angle", "c1", "wall_time_s", "error"};
  if (table.header != kHeader) throw ParseError(table.source, 1, "unexpected trials header");
  std::vector<TrialResult> rows;
  rows.reserve(table.rows.size());
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& f = table.rows[k];
    const std::size_t line = table.lines[k];
    TrialResult r;
    r.config.d = static_cast<int>(parse_int(f[0], table.source, line));
    r.config.n = parse_int(f[1], table.source, line);
    r.config.m = parse_int(f[2], table.source, line);
    r.config.lambda_min = parse_double(f[3], table.source, line);
    r.config.target_pe = parse_double(f[4], table.source, line);
    r.repetition = static_cast<int>(parse_int(f[5], table.source, line));
    r.norm_error = parse_optional(f[6], table.source, line);
    r.angle = parse_optional(f[7], table.source, line);
    r.c1 = parse_optional(f[8], table.source, line);
    r.wall_time_seconds = parse_optional(f[9], table.source, line).value_or(0.0);
    r.error = f[10];
    rows.push_back(std::move(r));
  }
  return rows;
}

SweepResult read_aggregates_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  if (table.header.size() != 6) throw ParseError(table.source, 1, "unexpected aggregate header");
  const auto parameter = parse_swept_parameter(table.header[0]);
  if (!parameter) throw ParseError(table.source, 1, "unknown swept parameter '" + table.header[0] + "'");
  SweepResult result;
  result.parameter = *parameter;
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& f = table.rows[k];
    const std::size_t line = table.lines[k];
    Aggregate a;
    a.value = parse_double(f[0], table.source, line);
    a.norm_error_mean = parse_optional(f[1], table.source, line);
    a.angle_mean = parse_optional(f[2], table.source, line);
    a.norm_error_std = parse_optional(f[3], table.source, line);
    a.angle_std = parse_optional(f[4], table.source, line);
    a.count = static_cast<int>(parse_int(f[5], table.source, line));
    result.grid.push_back(a.value);
    result.aggregates.push_back(a);
  }
  return result;
}

}  // namespace rankreg
