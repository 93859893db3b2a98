#include "qlab/error.hpp"

namespace qlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::InvalidDilatation: return "InvalidDilatation";
    case ErrorKind::NearCurve: return "NearCurve";
    case ErrorKind::TailDivergence: return "TailDivergence";
    case ErrorKind::JumpMismatch: return "JumpMismatch";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::DegenerateDerivative: return "DegenerateDerivative";
    case ErrorKind::OutOfAnnulus: return "OutOfAnnulus";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

NoConvergenceError::NoConvergenceError(int iterations, double last_residual)
    : Error(ErrorKind::NoConvergence,
            "no convergence after " + std::to_string(iterations) +
                " iterations (last residual " + std::to_string(last_residual) + ")"),
      iterations_(iterations),
      last_residual_(last_residual) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace qlab
