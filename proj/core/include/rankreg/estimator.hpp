#pragma once

#include <optional>

#include "rankreg/comparison_model.hpp"

namespace rankreg {

/// Covariance estimate over the second half of a SampleSet, normalized by
/// 1 / (N - d - 2) so that its inverse is unbiased for the true precision.
struct CovarianceEstimate {
  SpdMatrix sigma_hat;
  /// Explicit inverse, kept for inspection. Solves go through the Cholesky
  /// factor in `sigma_hat`.
  Matrix sigma_hat_inv;
  Eigen::Index dof_n = 0;
  Vector mu_hat;
};

struct Estimate {
  Vector beta_hat;
  std::size_t m_used = 0;
  Eigen::Index n_used = 0;
};

struct Metrics {
  /// ||beta_hat - c1 beta||; absent when c1 is unknown (deterministic link).
  std::optional<double> norm_error;
  /// Angle between beta_hat and beta, in [0, pi].
  double angle = 0.0;
};

/// Throws DegreesOfFreedomError when N <= d + 2 and FactorizationError when
/// the estimate is singular.
CovarianceEstimate estimate_covariance(const SampleSet& samples);

/// beta_hat = (1/M) sum_m y_m Sigma_hat^{-1} (x_i - x_j).
///
/// Labels are first folded into integer per-sample weights
/// w_k = sum_m y_m ([i_m = k] - [j_m = k]), so the d-vector sum_k w_k x_k, and
/// hence the estimate, is bitwise independent of the order of the triples.
Estimate estimate_beta(const ComparisonDataset& dataset, const SampleSet& samples, const CovarianceEstimate& cov);

double norm_error(const Vector& beta_hat, const Vector& beta, double c1);

/// Angle in [0, pi] between a and b (arccos of their cosine). Symmetric in its
/// arguments. Throws AngleUndefinedError for a zero vector.
double angle_between(const Vector& a, const Vector& b);

/// Throws AngleUndefinedError (carrying the norm error, when c1 is given) if
/// either vector is zero, DomainError if c1 <= 0.
Metrics compute_metrics(const Vector& beta_hat, const Vector& beta, std::optional<double> c1);

}  // namespace rankreg
