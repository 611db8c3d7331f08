#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace rankreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
/// Row-major so that one sample is one contiguous row.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Mixes a 64-bit word (SplitMix64 finalizer).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Order-sensitive hash of a list of 64-bit words, used to derive stream ids.
std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) noexcept;

/// Bit pattern of a double, for hashing configuration values.
std::uint64_t double_bits(double value) noexcept;

/// Counter-based random stream keyed by (master_seed, stream_id).
///
/// The k-th output is a fixed function of the key and k alone, so two streams
/// with the same key produce the same sequence on any thread, in any order
/// relative to other streams. Satisfies UniformRandomBitGenerator.
///
/// Distribution transforms (uniform, normal, bounded integers) are implemented
/// here rather than taken from <random> because the standard distributions are
/// implementation-defined and would break cross-platform reproducibility.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept;

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t counter() const noexcept { return counter_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;
  /// Uniform integer in [0, bound), unbiased. bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;
  /// Standard normal draw (Marsaglia polar method).
  double normal() noexcept;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Symmetric positive definite matrix, validated on construction.
///
/// Holds the lower Cholesky factor alongside the matrix so repeated solves and
/// sampling do not refactorize.
class SpdMatrix {
 public:
  /// Throws FactorizationError when `m` is not symmetric (relative 1e-12) or
  /// when the Cholesky factorization hits a non-positive pivot.
  static SpdMatrix from(Matrix m);

  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  const Matrix& matrix() const noexcept { return matrix_; }
  const Eigen::LLT<Matrix>& cholesky() const noexcept { return llt_; }
  Matrix lower() const { return llt_.matrixL(); }
  Matrix inverse() const;

 private:
  SpdMatrix(Matrix m, Eigen::LLT<Matrix> llt) : matrix_(std::move(m)), llt_(std::move(llt)) {}

  Matrix matrix_;
  Eigen::LLT<Matrix> llt_;
};

struct CovarianceSpec {
  int dim = 1;
  double lambda_min = 1.0;
};

struct GroundTruth {
  Vector beta;
  Vector mu;
};

/// Haar-distributed d x d orthogonal matrix: QR of a Gaussian matrix with the
/// columns of Q rescaled by sign(R_kk).
Matrix make_orthonormal_basis(RngStream& rng, int d);

/// Eigenvalues spaced linearly over [lambda_min, 1], endpoints included.
Vector covariance_spectrum(const CovarianceSpec& spec);

/// Sigma = Q diag(spectrum) Q^T with Q from make_orthonormal_basis. Ascending
/// eigenvalues go to basis columns in order.
SpdMatrix make_covariance(const CovarianceSpec& spec, RngStream& rng);

/// `count` rows of mu + L z, z standard normal, L the lower Cholesky factor.
FeatureMatrix sample_gaussian(RngStream& rng, const Vector& mu, const SpdMatrix& sigma, Eigen::Index count);

/// beta ~ N(0, 10 I), mu ~ Uniform([-5, 5]^d).
GroundTruth sample_ground_truth(RngStream& rng, int d);

}  // namespace rankreg
