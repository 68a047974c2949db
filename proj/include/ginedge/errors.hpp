#pragma once

#include <stdexcept>
#include <string>

namespace ginedge {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (e.g. x > 1 for Li_s).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid tuning parameter (sizes, intervals, tolerances).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An iterative or refining procedure did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double previous, double last)
      : Error(what), previous_(previous), last_(last) {}
  explicit ConvergenceError(const std::string& what) : Error(what) {}

  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_ = 0.0;
  double last_ = 0.0;
};

/// A discretized operator 1 - zK could not be factorized.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A Fredholm determinant that must be positive came out nonpositive.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// Loss of consistency in a derived numerical quantity.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Dense nonsymmetric eigensolver failure.
class EigensolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace ginedge
