#include "rankreg/comparison_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rankreg/errors.hpp"

namespace rankreg {
namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;

void require_slope(double slope, const char* what) {
  if (!(slope > 0.0) || !std::isfinite(slope)) {
    throw DomainError(std::string(what) + " must be a positive finite number, got " + std::to_string(slope));
  }
}

}  // namespace

LinkFunction LinkFunction::logistic(double slope) {
  require_slope(slope, "logistic slope");
  return LinkFunction(Kind::logistic, slope);
}

LinkFunction LinkFunction::probit(double scale) {
  require_slope(scale, "probit scale");
  return LinkFunction(Kind::probit, scale);
}

double LinkFunction::operator()(double x) const noexcept {
  switch (kind_) {
    case Kind::logistic: {
      // Evaluate on the side where exp() cannot overflow.
      if (x >= 0.0) return 1.0 / (1.0 + std::exp(-slope_ * x));
      const double e = std::exp(slope_ * x);
      return e / (1.0 + e);
    }
    case Kind::probit:
      return 0.5 * std::erfc(-slope_ * x);
    case Kind::deterministic:
      return x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double LinkFunction::derivative(double x) const {
  switch (kind_) {
    case Kind::logistic: {
      const double e = std::exp(-std::abs(slope_ * x));
      return slope_ * e / ((1.0 + e) * (1.0 + e));
    }
    case Kind::probit:
      return slope_ * kInvSqrtPi * std::exp(-slope_ * slope_ * x * x);
    case Kind::deterministic:
      break;
  }
  throw NotDifferentiableError("the deterministic link has no derivative");
}

void ModelSpec::validate() const {
  const Eigen::Index d = beta.size();
  if (d < 1) throw DomainError("model dimension must be >= 1");
  if (mu.size() != d || sigma.dim() != d) {
    throw DomainError("model dimensions disagree: beta " + std::to_string(d) + ", mu " +
                      std::to_string(mu.size()) + ", sigma " + std::to_string(sigma.dim()));
  }
}

void ComparisonDataset::validate() const {
  for (std::size_t k = 0; k < triples.size(); ++k) {
    const Comparison& c = triples[k];
    if (static_cast<Eigen::Index>(c.i) >= pool_size || static_cast<Eigen::Index>(c.j) >= pool_size) {
      throw DomainError("comparison " + std::to_string(k + 1) + " indexes outside the pool of " +
                        std::to_string(pool_size));
    }
    if (c.y != 1 && c.y != -1) {
      throw DomainError("comparison " + std::to_string(k + 1) + " has a label outside {-1, 1}");
    }
  }
}

SampleSet generate_samples(RngStream& rng, const ModelSpec& spec, Eigen::Index n) {
  spec.validate();
  if (n < 1) throw DomainError("sample count n must be >= 1");
  return SampleSet{n, sample_gaussian(rng, spec.mu, spec.sigma, 2 * n)};
}

Vector comparison_scores(const ModelSpec& spec, const SampleSet& samples) {
  if (samples.dim() != spec.dim()) throw DomainError("sample dimension does not match the model");
  return samples.comparison_half() * spec.beta;
}

ComparisonDataset generate_comparisons(RngStream& rng, const ModelSpec& spec, const SampleSet& samples,
                                       std::size_t m) {
  if (m < 1) throw DomainError("comparison count m must be >= 1");
  if (samples.n > std::numeric_limits<std::uint32_t>::max()) throw DomainError("pool too large");
  const Vector scores = comparison_scores(spec, samples);
  const auto pool = static_cast<std::uint64_t>(samples.n);

  ComparisonDataset out{samples.n, {}};
  out.triples.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto i = static_cast<std::uint32_t>(rng.below(pool));
    const auto j = static_cast<std::uint32_t>(rng.below(pool));
    const double u = rng.uniform();
    const double p = spec.link(scores(i) - scores(j));
    out.triples.push_back({i, j, static_cast<std::int8_t>(u < p ? 1 : -1)});
  }
  return out;
}

double flip_fraction(const ComparisonDataset& dataset, const ModelSpec& spec, const SampleSet& samples) {
  if (dataset.triples.empty()) throw DomainError("flip fraction of an empty dataset");
  if (dataset.pool_size != samples.n) throw DomainError("dataset was not generated from these samples");
  dataset.validate();
  const Vector scores = comparison_scores(spec, samples);
  double flipped = 0.0;
  for (const Comparison& c : dataset.triples) {
    const double s = scores(c.i) - scores(c.j);
    if (s == 0.0) {
      flipped += 0.5;
    } else if ((s > 0.0) != (c.y > 0)) {
      flipped += 1.0;
    }
  }
  return flipped / static_cast<double>(dataset.triples.size());
}

}  // namespace rankreg
