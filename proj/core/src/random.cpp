#include "rankreg/random.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include <Eigen/QR>

#include "rankreg/errors.hpp"

namespace rankreg {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t w : words) h = mix64(h ^ mix64(w + kGolden));
  return h;
}

std::uint64_t double_bits(double value) noexcept {
  if (value == 0.0) value = 0.0;  // fold -0 into +0
  std::uint64_t bits = 0;
  std::memcpy(&bits, &value, sizeof bits);
  return bits;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
    : master_seed_(master_seed),
      stream_id_(stream_id),
      key_(hash_words({master_seed, stream_id})) {}

RngStream::result_type RngStream::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double RngStream::uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

std::uint64_t RngStream::below(std::uint64_t bound) noexcept {
  // Reject the low sliver that would make r % bound non-uniform.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = (*this)();
    if (r >= threshold) return r % bound;
  }
}

double RngStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u = 0.0, v = 0.0, s = 0.0;
  do {
    u = uniform(-1.0, 1.0);
    v = uniform(-1.0, 1.0);
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

SpdMatrix SpdMatrix::from(Matrix m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw FactorizationError("covariance must be a non-empty square matrix");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  if (!std::isfinite(scale)) throw FactorizationError("covariance has non-finite entries");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw FactorizationError("covariance is not symmetric (max asymmetry " + std::to_string(asym) + ")");
  }
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success || scale == 0.0) {
    throw FactorizationError("covariance is not positive definite");
  }
  return SpdMatrix(std::move(m), std::move(llt));
}

Matrix SpdMatrix::inverse() const {
  return llt_.solve(Matrix::Identity(dim(), dim()));
}

Matrix make_orthonormal_basis(RngStream& rng, int d) {
  if (d < 1) throw DomainError("basis dimension must be >= 1");
  Matrix gaussian(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) gaussian(r, c) = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(gaussian);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix& r = qr.matrixQR();
  for (int k = 0; k < d; ++k) {
    if (r(k, k) < 0.0) q.col(k) = -q.col(k);
  }
  return q;
}

Vector covariance_spectrum(const CovarianceSpec& spec) {
  if (spec.dim < 1) throw DomainError("covariance dimension must be >= 1");
  if (!(spec.lambda_min > 0.0) || spec.lambda_min > 1.0) {
    throw DomainError("lambda_min must lie in (0, 1], got " + std::to_string(spec.lambda_min));
  }
  Vector lambda(spec.dim);
  if (spec.dim == 1) {
    lambda(0) = spec.lambda_min;
    return lambda;
  }
  const double step = (1.0 - spec.lambda_min) / static_cast<double>(spec.dim - 1);
  for (int i = 0; i < spec.dim; ++i) lambda(i) = spec.lambda_min + i * step;
  lambda(spec.dim - 1) = 1.0;
  return lambda;
}

SpdMatrix make_covariance(const CovarianceSpec& spec, RngStream& rng) {
  const Vector lambda = covariance_spectrum(spec);
  const Matrix q = make_orthonormal_basis(rng, spec.dim);
  Matrix sigma = q * lambda.asDiagonal() * q.transpose();
  sigma = 0.5 * (sigma + sigma.transpose()).eval();
  return SpdMatrix::from(std::move(sigma));
}

FeatureMatrix sample_gaussian(RngStream& rng, const Vector& mu, const SpdMatrix& sigma, Eigen::Index count) {
  const Eigen::Index d = sigma.dim();
  if (mu.size() != d) throw DomainError("mean and covariance dimensions disagree");
  if (count < 1) throw DomainError("sample count must be >= 1");
  const Matrix lower = sigma.lower();
  FeatureMatrix out(count, d);
  Vector z(d);
  for (Eigen::Index i = 0; i < count; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) z(k) = rng.normal();
    out.row(i) = (mu + lower.triangularView<Eigen::Lower>() * z).transpose();
  }
  return out;
}

GroundTruth sample_ground_truth(RngStream& rng, int d) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  GroundTruth truth{Vector(d), Vector(d)};
  const double beta_scale = std::sqrt(10.0);
  for (int k = 0; k < d; ++k) truth.beta(k) = beta_scale * rng.normal();
  for (int k = 0; k < d; ++k) truth.mu(k) = rng.uniform(-5.0, 5.0);
  return truth;
}

}  // namespace rankreg
