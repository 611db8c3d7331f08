#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankreg/comparison_model.hpp"
#include "rankreg/errors.hpp"

namespace rankreg {

/// One experimental configuration. A trial draws its own ground truth
/// (beta, mu, covariance basis), 2n samples and m comparisons.
struct TrialConfig {
  int d = 10;
  std::int64_t n = 1000;
  std::int64_t m = 1000;
  double lambda_min = 1.0;
  /// 0 selects the deterministic link; otherwise the logistic slope is solved for.
  double target_pe = 0.2;
  int repetitions = 10;
  std::uint64_t master_seed = 0;

  /// Checks ranges. `require_estimable` additionally demands n > d + 2.
  void validate(bool require_estimable = true) const;

  friend bool operator==(const TrialConfig&, const TrialConfig&) = default;
};

/// ceil(n ln n), at least 1.
std::int64_t n_log_n(std::int64_t n);

/// Everything a trial generates before estimation.
struct TrialInstance {
  ModelSpec model;
  SampleSet samples;
  ComparisonDataset comparisons;
  std::optional<double> c1;
};

/// Materializes the synthetic data of (config, repetition).
///
/// Random streams are keyed only by the fields that influence each stage:
/// ground truth by (d, lambda_min, repetition), samples and comparisons by
/// those plus n. Curves along m or target_pe therefore reuse the same ground
/// truth and samples, and smaller-m datasets are prefixes of larger ones.
TrialInstance build_trial_instance(const TrialConfig& config, int repetition);

struct TrialResult {
  TrialConfig config;
  int repetition = 0;
  std::optional<double> norm_error;
  std::optional<double> angle;
  std::optional<double> c1;
  double wall_time_seconds = 0.0;
  /// Empty on success.
  std::string error;

  bool ok() const noexcept { return error.empty(); }
};

/// A trial failed; carries the configuration that failed.
class TrialError : public Error {
 public:
  TrialError(const TrialConfig& config, int repetition, const std::string& what);

  const TrialConfig& config() const noexcept { return config_; }
  int repetition() const noexcept { return repetition_; }

 private:
  TrialConfig config_;
  int repetition_;
};

/// Throws TrialError on any failure.
TrialResult run_trial(const TrialConfig& config, int repetition);

enum class SweptParameter { n, m, d, lambda_min };
enum class MRule { fixed, n_log_n };

std::string_view to_string(SweptParameter p) noexcept;
std::string_view to_string(MRule r) noexcept;
std::optional<SweptParameter> parse_swept_parameter(std::string_view text) noexcept;
std::optional<MRule> parse_m_rule(std::string_view text) noexcept;

struct SweepSpec {
  TrialConfig base;
  SweptParameter parameter = SweptParameter::n;
  std::vector<double> grid;
  MRule m_rule = MRule::fixed;

  /// base with `parameter` set to `value`, and m recomputed under n_log_n.
  TrialConfig config_at(double value) const;
  /// Grid strictly increasing and non-empty, integral where the parameter is,
  /// every resulting config valid, and m not swept under n_log_n.
  void validate() const;
};

struct Aggregate {
  double value = 0.0;
  std::optional<double> norm_error_mean;
  std::optional<double> angle_mean;
  std::optional<double> norm_error_std;
  std::optional<double> angle_std;
  /// Successful trials at this grid point.
  int count = 0;
};

struct SweepResult {
  SweptParameter parameter = SweptParameter::n;
  std::vector<double> grid;
  /// Ordered by (grid index, repetition).
  std::vector<TrialResult> rows;
  std::vector<Aggregate> aggregates;
};

/// Value of the swept parameter in a trial's config.
double swept_value(const TrialConfig& config, SweptParameter parameter) noexcept;

/// Mean and sample standard deviation (n - 1 denominator; 0 for one trial)
/// of each metric over the successful rows at each grid value, summed in row
/// order.
std::vector<Aggregate> aggregate(SweptParameter parameter, const std::vector<double>& grid,
                                 const std::vector<TrialResult>& rows);

struct RunOptions {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Runs every (grid point, repetition). Failed trials are recorded in their
/// row and do not stop the sweep. Output does not depend on `threads`.
SweepResult run_sweep(const SweepSpec& spec, const RunOptions& options = {});

struct MinNQuery {
  TrialConfig base;
  double angle_threshold = 0.3;
  std::vector<std::int64_t> n_grid;

  void validate() const;
};

struct MinNResult {
  std::optional<std::int64_t> n;
  /// Grid points evaluated, in order, up to and including the first hit.
  SweepResult evaluated;
};

/// Smallest grid n whose mean angle over the repetitions, with m = ceil(n ln n),
/// is at most the threshold.
MinNResult find_min_n(const MinNQuery& query, const RunOptions& options = {});

struct WriteOptions {
  /// Wall-clock times differ between runs; leaving them out keeps the files
  /// byte-identical for a fixed seed.
  bool include_wall_time = false;
};

/// Writes `<prefix>.trials.csv` and `<prefix>.agg.csv`.
void write_results(const SweepResult& result, const std::filesystem::path& prefix, const WriteOptions& options = {});

std::string trials_to_csv(const SweepResult& result, const WriteOptions& options = {});
std::string aggregates_to_csv(const SweepResult& result);

/// Parses a trials CSV back into rows (config fields not stored in the file,
/// repetitions and master_seed, are left at their defaults).
std::vector<TrialResult> read_trials_csv(const std::filesystem::path& path);

/// Parses an aggregate CSV; the swept parameter is recovered from its header.
SweepResult read_aggregates_csv(const std::filesystem::path& path);

}  // namespace rankreg
