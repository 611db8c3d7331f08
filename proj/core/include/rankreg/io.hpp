#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankreg/comparison_model.hpp"
#include "rankreg/estimator.hpp"

namespace rankreg {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

double parse_double(std::string_view text, const std::string& source, std::size_t line);
std::int64_t parse_int(std::string_view text, const std::string& source, std::size_t line);

/// Comma-separated table with a mandatory header row. No quoting: none of
/// the files this library reads or writes needs it.
struct CsvTable {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based file line of each row, for error messages.
  std::vector<std::size_t> lines;

  /// Index of a header column, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in, const std::string& source);
CsvTable read_csv(const std::filesystem::path& path);

/// Writes `content` to `path` in one go; throws IoError naming the path.
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Samples: header x_1..x_d, 2N rows, comparison half first.
std::string samples_to_csv(const SampleSet& samples);
SampleSet read_samples_csv(const std::filesystem::path& path);

// Comparisons: header i,j,y with 1-based indices and y in {-1, 1}.
std::string comparisons_to_csv(const ComparisonDataset& dataset);
/// Indices are checked against `pool_size` and reported with their line.
ComparisonDataset read_comparisons_csv(const std::filesystem::path& path, Eigen::Index pool_size);

// Estimate: header n,m,beta_hat_1..beta_hat_d and one data row.
std::string estimate_to_csv(const Estimate& estimate);

/// Ground truth of a generated dataset.
struct TruthRecord {
  Vector beta;
  Vector mu;
  Matrix sigma;
  LinkFunction link = LinkFunction::deterministic();
  std::optional<double> c1;
};

// Truth: one row, header beta_1..beta_d, mu_1..mu_d, sigma_1_1..sigma_d_d
// (row-major), link, alpha, c1. link is "logistic", "probit" or "deterministic"; alpha
// and c1 are empty for the deterministic link.
std::string truth_to_csv(const TruthRecord& truth);
TruthRecord read_truth_csv(const std::filesystem::path& path);

}  // namespace rankreg
