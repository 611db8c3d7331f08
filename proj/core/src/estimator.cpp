#include "rankreg/estimator.hpp"

#include <cmath>
#include <string>

#include "rankreg/errors.hpp"

namespace rankreg {

CovarianceEstimate estimate_covariance(const SampleSet& samples) {
  const Eigen::Index n = samples.n;
  const Eigen::Index d = samples.dim();
  if (samples.features.rows() != 2 * n) throw DomainError("sample set must hold exactly 2N rows");
  if (n <= d + 2) {
    throw DegreesOfFreedomError("covariance estimate needs N > d + 2 (N = " + std::to_string(n) +
                                ", d = " + std::to_string(d) + ")");
  }
  const auto half = samples.covariance_half();
  Vector mu_hat = half.colwise().mean().transpose();
  const Matrix centered = half.rowwise() - mu_hat.transpose();
  Matrix scatter = centered.transpose() * centered;
  scatter = 0.5 * (scatter + scatter.transpose()).eval();
  scatter /= static_cast<double>(n - d - 2);

  SpdMatrix sigma_hat = [&] {
    try {
      return SpdMatrix::from(std::move(scatter));
    } catch (const FactorizationError& e) {
      throw FactorizationError(std::string("covariance estimate is singular: ") + e.what());
    }
  }();
  Matrix inv = sigma_hat.inverse();
  return CovarianceEstimate{std::move(sigma_hat), std::move(inv), n, std::move(mu_hat)};
}

Estimate estimate_beta(const ComparisonDataset& dataset, const SampleSet& samples, const CovarianceEstimate& cov) {
  const Eigen::Index d = samples.dim();
  if (cov.sigma_hat.dim() != d) {
    throw DomainError("covariance estimate is " + std::to_string(cov.sigma_hat.dim()) +
                      "-dimensional but samples are " + std::to_string(d) + "-dimensional");
  }
  if (dataset.triples.empty()) throw DomainError("cannot estimate from an empty comparison dataset");
  if (dataset.pool_size != samples.n) throw DomainError("comparison pool size does not match the sample set");
  dataset.validate();

  std::vector<std::int64_t> weight(static_cast<std::size_t>(samples.n), 0);
  for (const Comparison& c : dataset.triples) {
    weight[c.i] += c.y;
    weight[c.j] -= c.y;
  }
  Vector sum = Vector::Zero(d);
  const auto pool = samples.comparison_half();
  for (Eigen::Index k = 0; k < samples.n; ++k) {
    if (weight[k] != 0) sum += static_cast<double>(weight[k]) * pool.row(k).transpose();
  }
  Vector beta_hat = cov.sigma_hat.cholesky().solve(sum) / static_cast<double>(dataset.triples.size());
  return Estimate{std::move(beta_hat), dataset.triples.size(), samples.n};
}

double norm_error(const Vector& beta_hat, const Vector& beta, double c1) {
  if (beta_hat.size() != beta.size()) throw DomainError("estimate and truth dimensions disagree");
  if (!(c1 > 0.0)) throw DomainError("c1 must be positive");
  return (beta_hat - c1 * beta).norm();
}

double angle_between(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DomainError("angle between vectors of different dimension");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw AngleUndefinedError("angle undefined for a zero vector", 0.0, false);
  // 2 atan2(|a^ - b^|, |a^ + b^|) equals arccos of the cosine but keeps full
  // precision near 0 and pi, where arccos of a rounded cosine loses half the digits.
  const Vector ua = a / na;
  const Vector ub = b / nb;
  return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
}

Metrics compute_metrics(const Vector& beta_hat, const Vector& beta, std::optional<double> c1) {
  Metrics out;
  if (c1) out.norm_error = norm_error(beta_hat, beta, *c1);
  try {
    out.angle = angle_between(beta_hat, beta);
  } catch (const AngleUndefinedError& e) {
    throw AngleUndefinedError(e.what(), out.norm_error.value_or(0.0), out.norm_error.has_value());
  }
  return out;
}

}  // namespace rankreg
