#pragma once

#include <cmath>
#include <numbers>

#include "rankreg/comparison_model.hpp"

namespace rankreg {

/// Law of the score difference s = beta^T (X_i - X_j) ~ N(0, sigma_s^2),
/// sigma_s^2 = 2 beta^T Sigma beta.
struct ScoreDifferenceLaw {
  double sigma_s = 1.0;

  double density(double s) const noexcept {
    constexpr double kInvSqrt2Pi = std::numbers::inv_sqrtpi / std::numbers::sqrt2;
    const double z = s / sigma_s;
    return kInvSqrt2Pi * std::exp(-0.5 * z * z) / sigma_s;
  }
};

/// Trapezoid grid: `points` nodes over [-half_width sigma_s, half_width sigma_s]
/// (the same node count over [-half_width sigma_s, 0] for the flip probability).
struct QuadratureSpec {
  int points = 4097;
  double half_width = 4.0;

  /// Throws DomainError unless points is odd and >= 3 and half_width >= 3.
  void validate() const;
};

/// Composite trapezoidal rule with `points` equally spaced nodes on [a, b].
template <typename F>
double trapezoid(F&& f, double a, double b, int points) {
  const double h = (b - a) / static_cast<double>(points - 1);
  double sum = 0.5 * (f(a) + f(b));
  for (int k = 1; k < points - 1; ++k) sum += f(a + k * h);
  return sum * h;
}

/// Throws DegenerateModelError when beta^T Sigma beta is zero.
ScoreDifferenceLaw score_sigma(const Vector& beta, const SpdMatrix& sigma);
ScoreDifferenceLaw score_sigma(const ModelSpec& spec);

/// c1 = 4 E[f'(s)], by trapezoid over the truncated Gaussian window. Throws
/// NotDifferentiableError for the deterministic link.
double estimate_c1(const LinkFunction& link, const ScoreDifferenceLaw& law, const QuadratureSpec& quad = {});

/// Probability that a label disagrees with the sign of its score difference:
/// 2 * integral of f(s) phi(s) over [-half_width sigma_s, 0]. Exactly 0 for
/// the deterministic link.
double estimate_pe(const LinkFunction& link, const ScoreDifferenceLaw& law, const QuadratureSpec& quad = {});

/// Logistic slope whose estimate_pe is within 1e-6 of target_pe. Brackets by
/// doubling or halving from 1, then bisects in log(alpha).
/// Throws DomainError unless 0 < target_pe < 1/2.
double solve_alpha_for_pe(double target_pe, const ScoreDifferenceLaw& law, const QuadratureSpec& quad = {});

}  // namespace rankreg
