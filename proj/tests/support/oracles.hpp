#pragma once

// Reference computations that share no code path with the library: they draw
// from <random> rather than RngStream and evaluate formulas term by term.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace rankreg::oracle {

inline double logistic(double slope, double x) { return 1.0 / (1.0 + std::exp(-slope * x)); }

struct MonteCarlo {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// 4 E[f'(s)], s ~ N(0, sigma_s^2), f logistic with the given slope.
///
/// Samples s directly when the Gaussian is the narrower of the two densities
/// (slope * sigma_s <= 1). Otherwise uses E[f'(s)] = E_L[phi(L)] with L drawn
/// from the logistic density f' itself, which has far lower variance when f'
/// is a spike inside a wide Gaussian.
inline MonteCarlo c1_logistic(double slope, double sigma_s, std::size_t draws, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  double sum = 0.0, sum_sq = 0.0;
  if (slope * sigma_s <= 1.0) {
    std::normal_distribution<double> normal(0.0, sigma_s);
    for (std::size_t k = 0; k < draws; ++k) {
      const double f = logistic(slope, normal(gen));
      const double v = 4.0 * slope * f * (1.0 - f);
      sum += v;
      sum_sq += v * v;
    }
  } else {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double norm = 1.0 / (sigma_s * std::sqrt(2.0 * std::numbers::pi));
    for (std::size_t k = 0; k < draws; ++k) {
      double u = unif(gen);
      while (u == 0.0) u = unif(gen);
      const double l = std::log(u / (1.0 - u)) / slope;
      const double v = 4.0 * norm * std::exp(-0.5 * (l / sigma_s) * (l / sigma_s));
      sum += v;
      sum_sq += v * v;
    }
  }
  const double n = static_cast<double>(draws);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return {mean, std::sqrt(var / n)};
}

/// Plain Monte Carlo 4 mean(f'(s)) over Gaussian draws.
inline MonteCarlo c1_logistic_gaussian_draws(double slope, double sigma_s, std::size_t draws, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, sigma_s);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t k = 0; k < draws; ++k) {
    const double f = logistic(slope, normal(gen));
    const double v = 4.0 * slope * f * (1.0 - f);
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(draws);
  const double mean = sum / n;
  return {mean, std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / n)};
}

/// Probit link f(x) = (1 + erf(a x)) / 2 has closed forms under s ~ N(0, sigma^2):
/// c1 = 4 a / sqrt(pi (1 + 2 a^2 sigma^2)) and p_e = atan(tau / sigma) / pi with
/// tau = 1 / (sqrt(2) a) (probability that s and s + N(0, tau^2) differ in sign).
inline double c1_probit(double a, double sigma) {
  return 4.0 * a / std::sqrt(std::numbers::pi * (1.0 + 2.0 * a * a * sigma * sigma));
}
inline double pe_probit(double a, double sigma) {
  return std::atan(1.0 / (std::numbers::sqrt2 * a * sigma)) / std::numbers::pi;
}

/// Gaussian mass outside +-k standard deviations.
inline double two_sided_tail(double k) { return std::erfc(k / std::numbers::sqrt2); }

/// beta_hat evaluated literally: (1/M) sum_m y_m Sigma_hat^{-1} (x_i - x_j),
/// with Sigma_hat from the two-pass textbook formula and an LU inverse.
inline Eigen::VectorXd beta_hat_literal(const Eigen::MatrixXd& features, long n,
                                        const std::vector<std::array<long, 3>>& triples) {
  const long d = features.cols();
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(d);
  for (long r = n; r < 2 * n; ++r) mu += features.row(r).transpose();
  mu /= static_cast<double>(n);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
  for (long r = n; r < 2 * n; ++r) {
    const Eigen::VectorXd c = features.row(r).transpose() - mu;
    s += c * c.transpose();
  }
  s /= static_cast<double>(n - d - 2);
  const Eigen::MatrixXd inv = s.fullPivLu().inverse();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  for (const auto& t : triples) {
    beta += static_cast<double>(t[2]) * inv * (features.row(t[0]) - features.row(t[1])).transpose();
  }
  return beta / static_cast<double>(triples.size());
}

}  // namespace rankreg::oracle
