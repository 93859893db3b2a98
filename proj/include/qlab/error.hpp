#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qlab {

enum class ErrorKind {
  InvalidArgument,
  OutOfDomain,
  GridTooSmall,
  SupportViolation,
  NoConvergence,
  InvalidDilatation,
  NearCurve,
  TailDivergence,
  JumpMismatch,
  RangeError,
  InsufficientSamples,
  DegenerateDerivative,
  OutOfAnnulus,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind is
/// stable and is what callers (and the CLI) switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the Beltrami solver when the Neumann series has not met the
/// requested tolerance within the iteration budget.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(int iterations, double last_residual);

  int iterations() const noexcept { return iterations_; }
  double last_residual() const noexcept { return last_residual_; }

 private:
  int iterations_;
  double last_residual_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace qlab
