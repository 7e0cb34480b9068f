#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace tosi {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or precondition violation (bad ranges, empty sets, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Too few observations to form a split or estimate.
class TooFewObservationsError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A covariance, variance or design is numerically singular. Carries the
/// offending 0-based parameter index when one is known.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what,
                            std::optional<std::size_t> index = std::nullopt)
      : Error(what), index_(index) {}

  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  std::optional<std::size_t> index_;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Residual degrees of freedom exhausted (n <= support size).
class DegreesOfFreedomError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (CSV, set files, flags).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace tosi
