#include "rankreg/calibration.hpp"

#include <string>

#include "rankreg/errors.hpp"

namespace rankreg {
namespace {

constexpr double kPeTolerance = 1e-6;

void validate_law(const ScoreDifferenceLaw& law) {
  if (!(law.sigma_s > 0.0) || !std::isfinite(law.sigma_s)) {
    throw DegenerateModelError("score difference deviation must be positive and finite");
  }
}

}  // namespace

void QuadratureSpec::validate() const {
  if (points < 3 || points % 2 == 0) {
    throw DomainError("quadrature point count must be odd and >= 3, got " + std::to_string(points));
  }
  if (!(half_width >= 3.0) || !std::isfinite(half_width)) {
    throw DomainError("quadrature half width must be >= 3 standard deviations");
  }
}

ScoreDifferenceLaw score_sigma(const Vector& beta, const SpdMatrix& sigma) {
  if (beta.size() != sigma.dim()) throw DomainError("beta and sigma dimensions disagree");
  const double quad_form = beta.dot(sigma.matrix() * beta);
  if (!(quad_form > 0.0)) throw DegenerateModelError("beta is zero; score differences are degenerate");
  return ScoreDifferenceLaw{std::sqrt(2.0 * quad_form)};
}

ScoreDifferenceLaw score_sigma(const ModelSpec& spec) { return score_sigma(spec.beta, spec.sigma); }

double estimate_c1(const LinkFunction& link, const ScoreDifferenceLaw& law, const QuadratureSpec& quad) {
  if (!link.differentiable()) {
    throw NotDifferentiableError("c1 is undefined for the deterministic link");
  }
  validate_law(law);
  quad.validate();
  const double w = quad.half_width * law.sigma_s;
  return 4.0 * trapezoid([&](double s) { return link.derivative(s) * law.density(s); }, -w, w, quad.points);
}

double estimate_pe(const LinkFunction& link, const ScoreDifferenceLaw& law, const QuadratureSpec& quad) {
  validate_law(law);
  quad.validate();
  if (link.kind() == LinkFunction::Kind::deterministic) return 0.0;
  const double w = quad.half_width * law.sigma_s;
  return 2.0 * trapezoid([&](double s) { return link(s) * law.density(s); }, -w, 0.0, quad.points);
}

double solve_alpha_for_pe(double target_pe, const ScoreDifferenceLaw& law, const QuadratureSpec& quad) {
  if (!(target_pe > 0.0 && target_pe < 0.5)) {
    throw DomainError("target flip probability must lie in (0, 1/2), got " + std::to_string(target_pe));
  }
  validate_law(law);
  quad.validate();
  const auto pe_at = [&](double alpha) { return estimate_pe(LinkFunction::logistic(alpha), law, quad); };

  // pe is strictly decreasing in alpha: lo is always too noisy, hi too clean.
  double lo = 1.0;
  double hi = 1.0;
  double pe = pe_at(1.0);
  constexpr int kMaxDoublings = 1000;
  if (pe > target_pe) {
    for (int k = 0; pe > target_pe; ++k) {
      if (k == kMaxDoublings) throw DomainError("flip probability target is below the reachable range");
      lo = hi;
      hi *= 2.0;
      pe = pe_at(hi);
    }
  } else {
    for (int k = 0; pe <= target_pe; ++k) {
      if (k == kMaxDoublings) throw DomainError("flip probability target is above the reachable range");
      hi = lo;
      lo *= 0.5;
      pe = pe_at(lo);
    }
  }

  double mid = std::sqrt(lo * hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = std::sqrt(lo * hi);
    pe = pe_at(mid);
    if (std::abs(pe - target_pe) <= 1e-3 * kPeTolerance) break;
    if (pe > target_pe) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi / lo - 1.0 < 1e-15) break;
  }
  if (!(std::abs(pe - target_pe) <= kPeTolerance)) {
    throw DomainError("could not reach flip probability " + std::to_string(target_pe) + " within tolerance");
  }
  return mid;
}

}  // namespace rankreg
