#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "rankreg/calibration.hpp"
#include "rankreg/errors.hpp"
#include "rankreg/estimator.hpp"
#include "support/oracles.hpp"

namespace rankreg {
namespace {

struct Fixture {
  ModelSpec model;
  SampleSet samples;
  ComparisonDataset data;
};

Fixture random_fixture(std::uint64_t seed, int d, Eigen::Index n, std::size_t m) {
  RngStream truth(seed, 0), srng(seed, 1), crng(seed, 2);
  GroundTruth t = sample_ground_truth(truth, d);
  SpdMatrix sigma = make_covariance({d, 0.3}, truth);
  ModelSpec model{t.beta, t.mu, sigma, LinkFunction::logistic(0.5)};
  SampleSet s = generate_samples(srng, model, n);
  ComparisonDataset data = generate_comparisons(crng, model, s, m);
  return {std::move(model), std::move(s), std::move(data)};
}

CovarianceEstimate identity_covariance(int d, Eigen::Index n) {
  return CovarianceEstimate{SpdMatrix::from(Matrix::Identity(d, d)), Matrix::Identity(d, d), n, Vector::Zero(d)};
}

TEST(EstimateCovariance, HandComputedOneDimensional) {
  FeatureMatrix rows(8, 1);
  rows << 9, 9, 9, 9, 0, 2, 4, 6;
  const CovarianceEstimate cov = estimate_covariance(SampleSet{4, rows});
  EXPECT_DOUBLE_EQ(cov.mu_hat(0), 3.0);
  EXPECT_DOUBLE_EQ(cov.sigma_hat.matrix()(0, 0), 20.0);
  EXPECT_DOUBLE_EQ(cov.sigma_hat_inv(0, 0), 1.0 / 20.0);
  EXPECT_EQ(cov.dof_n, 4);
}

TEST(EstimateCovariance, ConstantRowsAreSingular) {
  FeatureMatrix rows = FeatureMatrix::Ones(20, 2);
  rows.topRows(10).setRandom();
  EXPECT_THROW(estimate_covariance(SampleSet{10, rows}), FactorizationError);
}

TEST(EstimateCovariance, NeedsMoreThanDPlusTwoSamples) {
  RngStream rng(1, 1);
  const SpdMatrix eye = SpdMatrix::from(Matrix::Identity(3, 3));
  EXPECT_THROW(estimate_covariance(SampleSet{5, sample_gaussian(rng, Vector::Zero(3), eye, 10)}),
               DegreesOfFreedomError);
  EXPECT_NO_THROW(estimate_covariance(SampleSet{6, sample_gaussian(rng, Vector::Zero(3), eye, 12)}));
}

TEST(EstimateCovariance, InverseIsInverse) {
  const Fixture f = random_fixture(3, 6, 50, 10);
  const CovarianceEstimate cov = estimate_covariance(f.samples);
  EXPECT_LE((cov.sigma_hat_inv * cov.sigma_hat.matrix() - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(EstimateCovariance, InverseIsUnbiased) {
  RngStream basis(4, 0);
  const SpdMatrix sigma = make_covariance({5, 0.2}, basis);
  const Matrix precision = sigma.inverse();
  const ModelSpec model{Vector::Ones(5), Vector::Zero(5), sigma, LinkFunction::deterministic()};
  Matrix mean = Matrix::Zero(5, 5);
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    RngStream rng(4, 1 + t);
    mean += estimate_covariance(generate_samples(rng, model, 200)).sigma_hat_inv;
  }
  mean /= trials;
  EXPECT_LT((mean - precision).norm() / precision.norm(), 0.02);
}

TEST(EstimateBeta, TwoTermAverage) {
  FeatureMatrix rows = FeatureMatrix::Zero(6, 2);
  rows.row(0) << 1, 0;
  rows.row(2) << 0, 1;
  const SampleSet s{3, rows};
  const ComparisonDataset data{3, {{0, 1, 1}, {2, 1, -1}}};
  const Estimate est = estimate_beta(data, s, identity_covariance(2, 3));
  EXPECT_DOUBLE_EQ(est.beta_hat(0), 0.5);
  EXPECT_DOUBLE_EQ(est.beta_hat(1), -0.5);
  EXPECT_EQ(est.m_used, 2u);
  EXPECT_EQ(est.n_used, 3);
}

TEST(EstimateBeta, MatchesLiteralEvaluation) {
  const Fixture f = random_fixture(5, 4, 60, 3000);
  const Estimate est = estimate_beta(f.data, f.samples, estimate_covariance(f.samples));
  std::vector<std::array<long, 3>> triples;
  for (const auto& c : f.data.triples) triples.push_back({long(c.i), long(c.j), long(c.y)});
  const Vector literal = oracle::beta_hat_literal(f.samples.features, f.samples.n, triples);
  EXPECT_LT((est.beta_hat - literal).norm() / literal.norm(), 1e-10);
}

TEST(EstimateBeta, LinearInLabels) {
  const Fixture f = random_fixture(6, 5, 80, 2000);
  const CovarianceEstimate cov = estimate_covariance(f.samples);
  ComparisonDataset negated = f.data;
  for (auto& c : negated.triples) c.y = static_cast<std::int8_t>(-c.y);
  const Vector a = estimate_beta(f.data, f.samples, cov).beta_hat;
  const Vector b = estimate_beta(negated, f.samples, cov).beta_hat;
  EXPECT_EQ(b, (-a).eval());
}

TEST(EstimateBeta, PermutationInvariant) {
  const Fixture f = random_fixture(7, 5, 80, 2000);
  const CovarianceEstimate cov = estimate_covariance(f.samples);
  ComparisonDataset shuffled = f.data;
  std::mt19937_64 gen(7);
  for (int round = 0; round < 5; ++round) {
    std::shuffle(shuffled.triples.begin(), shuffled.triples.end(), gen);
    EXPECT_EQ(estimate_beta(shuffled, f.samples, cov).beta_hat, estimate_beta(f.data, f.samples, cov).beta_hat);
  }
}

TEST(EstimateBeta, ScaleEquivariant) {
  const Fixture f = random_fixture(8, 5, 80, 2000);
  const Vector base = estimate_beta(f.data, f.samples, estimate_covariance(f.samples)).beta_hat;
  for (double c : {0.001, 0.37, 3.0, 1e4}) {
    const SampleSet scaled{f.samples.n, f.samples.features * c};
    const Vector b = estimate_beta(f.data, scaled, estimate_covariance(scaled)).beta_hat;
    EXPECT_LT((b - base / c).norm() / (base / c).norm(), 1e-10) << "c=" << c;
  }
}

TEST(EstimateBeta, RejectsMismatches) {
  const Fixture f = random_fixture(9, 3, 30, 100);
  EXPECT_THROW(estimate_beta(f.data, f.samples, identity_covariance(4, 30)), DomainError);
  ComparisonDataset bad = f.data;
  bad.triples.push_back({30, 0, 1});
  EXPECT_THROW(estimate_beta(bad, f.samples, identity_covariance(3, 30)), DomainError);
  EXPECT_THROW(estimate_beta(ComparisonDataset{30, {}}, f.samples, identity_covariance(3, 30)), DomainError);
}

TEST(EstimateBeta, UnbiasedUpToC1) {
  // d = 2, N = 100, M = 1e4, logistic slope 5, beta = e_1, Sigma = I.
  const Vector beta = (Vector(2) << 1.0, 0.0).finished();
  const ModelSpec model{beta, Vector::Zero(2), SpdMatrix::from(Matrix::Identity(2, 2)), LinkFunction::logistic(5.0)};
  const double c1 = estimate_c1(model.link, score_sigma(model));
  const int trials = 500;
  Vector sum = Vector::Zero(2), sum_sq = Vector::Zero(2);
  for (int t = 0; t < trials; ++t) {
    RngStream srng(10, 2 * t), crng(10, 2 * t + 1);
    const SampleSet s = generate_samples(srng, model, 100);
    const auto data = generate_comparisons(crng, model, s, 10000);
    const Vector b = estimate_beta(data, s, estimate_covariance(s)).beta_hat;
    sum += b;
    sum_sq += b.cwiseProduct(b);
  }
  const Vector mean = sum / trials;
  const Vector se = ((sum_sq / trials - mean.cwiseProduct(mean)) / (trials - 1.0)).cwiseSqrt();
  for (int k = 0; k < 2; ++k) {
    EXPECT_LT(std::abs(mean(k) - c1 * beta(k)), 3.0 * se(k)) << "coordinate " << k << " mean " << mean(k)
                                                              << " c1 beta " << c1 * beta(k) << " se " << se(k);
  }
}

TEST(Metrics, IdentityCase) {
  const Vector beta = (Vector(3) << 1.5, -2.0, 0.25).finished();
  const Metrics m = compute_metrics(2.0 * beta, beta, 2.0);
  EXPECT_EQ(*m.norm_error, 0.0);
  EXPECT_EQ(m.angle, 0.0);
}

TEST(Metrics, AntipodalCase) {
  const Vector beta = (Vector(3) << 1.5, -2.0, 0.25).finished();
  EXPECT_EQ(compute_metrics(-beta, beta, std::nullopt).angle, std::numbers::pi);
}

TEST(Metrics, OrthogonalAxes) {
  const Metrics m = compute_metrics((Vector(2) << 1, 0).finished(), (Vector(2) << 0, 1).finished(), 2.0);
  EXPECT_DOUBLE_EQ(*m.norm_error, std::sqrt(5.0));
  EXPECT_DOUBLE_EQ(m.angle, std::numbers::pi / 2);
}

TEST(Metrics, AngleIsSymmetricAndScaleInvariant) {
  RngStream rng(11, 0);
  for (int k = 0; k < 200; ++k) {
    Vector a(4), b(4);
    for (int c = 0; c < 4; ++c) {
      a(c) = rng.normal();
      b(c) = rng.normal();
    }
    const double ab = angle_between(a, b);
    EXPECT_EQ(ab, angle_between(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, std::numbers::pi);
    const double t = std::exp(4.0 * rng.normal());
    EXPECT_NEAR(angle_between(t * a, b), ab, 1e-14);
    EXPECT_NEAR(std::cos(ab), a.dot(b) / (a.norm() * b.norm()), 1e-14);
  }
}

TEST(Metrics, ZeroVectorAngleUndefined) {
  const Vector beta = (Vector(2) << 1, 1).finished();
  try {
    compute_metrics(Vector::Zero(2), beta, 0.5);
    FAIL() << "expected AngleUndefinedError";
  } catch (const AngleUndefinedError& e) {
    ASSERT_TRUE(e.has_norm_error());
    EXPECT_DOUBLE_EQ(e.norm_error(), 0.5 * std::sqrt(2.0));
  }
  EXPECT_THROW(compute_metrics(beta, Vector::Zero(2), std::nullopt), AngleUndefinedError);
  EXPECT_THROW(compute_metrics(beta, beta, 0.0), DomainError);
}

}  // namespace
}  // namespace rankreg
