#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hktr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

/// The Hermite Gram matrix could not be factorized even with the largest jitter.
class IllConditionedGram : public Error {
 public:
  IllConditionedGram(double jitter, std::size_t n_centers)
      : Error("ill-conditioned Gram matrix: factorization failed at jitter " + std::to_string(jitter) +
              " with " + std::to_string(n_centers) + " centers"),
        jitter_(jitter),
        n_centers_(n_centers) {}

  double jitter() const noexcept { return jitter_; }
  std::size_t n_centers() const noexcept { return n_centers_; }

 private:
  double jitter_;
  std::size_t n_centers_;
};

/// The surrogate dropped to (or below) the positivity floor required by the relative error constraint.
class AssumptionViolation : public Error {
 public:
  using Error::Error;
};

class LineSearchFailed : public Error {
 public:
  using Error::Error;
};

/// The subproblem start point violates the trust-region constraint.
class SubproblemInfeasible : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hktr
