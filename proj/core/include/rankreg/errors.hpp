#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rankreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The covariance estimate needs N > d + 2 samples.
class DegreesOfFreedomError : public Error {
 public:
  using Error::Error;
};

/// Cholesky factorization failed (matrix not positive definite).
class FactorizationError : public Error {
 public:
  using Error::Error;
};

/// beta = 0, so the score difference law collapses to a point mass.
class DegenerateModelError : public Error {
 public:
  using Error::Error;
};

/// A derivative-based quantity was requested for the deterministic link.
class NotDifferentiableError : public Error {
 public:
  using Error::Error;
};

/// The angle metric is undefined for a zero vector. The norm error, which
/// is still well defined, travels with the exception when it was requested.
class AngleUndefinedError : public Error {
 public:
  AngleUndefinedError(const std::string& what, double norm_error, bool has_norm_error)
      : Error(what), norm_error_(norm_error), has_norm_error_(has_norm_error) {}

  bool has_norm_error() const noexcept { return has_norm_error_; }
  double norm_error() const noexcept { return norm_error_; }

 private:
  double norm_error_;
  bool has_norm_error_;
};

/// Malformed text input. `line()` is 1-based; 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message)
      : Error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rankreg
