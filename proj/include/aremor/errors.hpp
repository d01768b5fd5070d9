#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aremor {

/// Base class of every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative eigenvalue kernel hit its sweep cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A Lyapunov/Sylvester operator is singular to working precision, or the
/// coefficient matrix is not stable.
class SingularOperatorError : public Error {
 public:
  using Error::Error;
};

/// Dense Riccati solve failed; carries the last relative residual reached.
class AreSolveError : public Error {
 public:
  AreSolveError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

/// Requested reduced order exceeds what the data supports.
class RankError : public Error {
 public:
  RankError(const std::string& what, std::size_t attainable)
      : Error(what), attainable_(attainable) {}
  std::size_t attainable() const { return attainable_; }

 private:
  std::size_t attainable_;
};

/// Inputs violate a precondition (dimensions, biorthogonality, empty regions).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Shifted linear system is singular (shift on the spectrum).
class SingularShiftError : public Error {
 public:
  using Error::Error;
};

/// Two-sided basis growth produced a (near) orthogonal pair.
class BreakdownError : public Error {
 public:
  BreakdownError(const std::string& what, std::size_t iteration)
      : Error(what), iteration_(iteration) {}
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

/// Configuration file or command line could not be validated.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace aremor
