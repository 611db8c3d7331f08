#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rankreg/experiment.hpp"

namespace rankreg {

/// Contents of a sweep / min-n configuration file.
///
/// Format: one `key = value` per line, `#` starts a comment, lists are
/// comma-separated. Keys: d, n, m, lambda_min, target_pe, repetitions,
/// master_seed, swept_parameter, grid, m_rule, n_grid, angle_threshold.
struct ExperimentConfig {
  TrialConfig base;
  std::optional<SweptParameter> swept_parameter;
  std::vector<double> grid;
  MRule m_rule = MRule::fixed;
  std::vector<std::int64_t> n_grid;
  double angle_threshold = 0.3;

  /// Requires swept_parameter; an n sweep without `grid` falls back to n_grid.
  SweepSpec to_sweep_spec() const;
  /// Requires n_grid.
  MinNQuery to_min_n_query() const;
};

/// Throws ParseError naming the key and line for unknown keys, duplicate keys
/// and malformed values.
ExperimentConfig parse_experiment_config(std::istream& in, const std::string& source);
ExperimentConfig parse_experiment_config(const std::filesystem::path& path);

}  // namespace rankreg
