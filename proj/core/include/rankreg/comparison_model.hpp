#pragma once

#include <cstdint>
#include <vector>

#include "rankreg/random.hpp"

namespace rankreg {

/// Probability that the first item of a pair wins, as a function of the
/// score difference. Every kind satisfies f(-x) = 1 - f(x) and f(0) = 1/2.
class LinkFunction {
 public:
  enum class Kind { logistic, probit, deterministic };

  /// f(x) = 1 / (1 + exp(-slope x)).
  static LinkFunction logistic(double slope);
  /// f(x) = (1 + erf(scale x)) / 2.
  static LinkFunction probit(double scale);
  /// Limit of infinite slope: sign rule, ties resolved by a fair coin.
  static LinkFunction deterministic() noexcept { return LinkFunction(Kind::deterministic, 0.0); }

  Kind kind() const noexcept { return kind_; }
  /// Slope (logistic) or scale (probit); 0 for the deterministic link.
  double slope() const noexcept { return slope_; }
  bool differentiable() const noexcept { return kind_ != Kind::deterministic; }

  double operator()(double x) const noexcept;
  /// Throws NotDifferentiableError for the deterministic link.
  double derivative(double x) const;

  friend bool operator==(const LinkFunction&, const LinkFunction&) = default;

 private:
  LinkFunction(Kind kind, double slope) noexcept : kind_(kind), slope_(slope) {}

  Kind kind_;
  double slope_;
};

struct ModelSpec {
  Vector beta;
  Vector mu;
  SpdMatrix sigma;
  LinkFunction link;

  Eigen::Index dim() const noexcept { return beta.size(); }
  /// Throws DomainError when vector and matrix dimensions disagree.
  void validate() const;
};

/// 2N feature rows. Rows [0, N) are the comparison pool, rows [N, 2N) feed
/// the covariance estimate.
struct SampleSet {
  Eigen::Index n = 0;
  FeatureMatrix features;

  Eigen::Index dim() const noexcept { return features.cols(); }
  auto comparison_half() const { return features.topRows(n); }
  auto covariance_half() const { return features.bottomRows(n); }
};

/// One oracle answer. Indices are 0-based into the comparison half.
struct Comparison {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  std::int8_t y = 1;

  friend bool operator==(const Comparison&, const Comparison&) = default;
};

struct ComparisonDataset {
  /// Size of the pool the indices refer to.
  Eigen::Index pool_size = 0;
  std::vector<Comparison> triples;

  std::size_t size() const noexcept { return triples.size(); }
  /// Throws DomainError on an out-of-range index or a label outside {-1, +1}.
  void validate() const;
};

SampleSet generate_samples(RngStream& rng, const ModelSpec& spec, Eigen::Index n);

/// beta^T x for every row of the comparison half.
Vector comparison_scores(const ModelSpec& spec, const SampleSet& samples);

/// Draws m pairs uniformly from [N] x [N] (self-pairs allowed) and labels each
/// +1 with probability f(beta^T (x_i - x_j)). Each comparison consumes, in
/// order, one draw for i, one for j and one uniform for the label, so datasets
/// of different sizes from the same stream share their common prefix.
ComparisonDataset generate_comparisons(RngStream& rng, const ModelSpec& spec, const SampleSet& samples,
                                       std::size_t m);

/// Fraction of labels disagreeing with sign(beta^T (x_i - x_j)); exact score
/// ties count 1/2.
double flip_fraction(const ComparisonDataset& dataset, const ModelSpec& spec, const SampleSet& samples);

}  // namespace rankreg
