#include "steklov/error.hpp"

namespace steklov {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::OddTotalDegree: return "OddTotalDegree";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotConnected: return "NotConnected";
    case ErrorKind::SamplingExhausted: return "SamplingExhausted";
    case ErrorKind::MeshInvariantViolated: return "MeshInvariantViolated";
    case ErrorKind::OrientationConflict: return "OrientationConflict";
    case ErrorKind::NonIntegerGenus: return "NonIntegerGenus";
    case ErrorKind::NonIntegerResult: return "NonIntegerResult";
    case ErrorKind::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorKind::UnknownLoop: return "UnknownLoop";
    case ErrorKind::SingularInterior: return "SingularInterior";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::ZeroBoundaryNorm: return "ZeroBoundaryNorm";
    case ErrorKind::InsufficientRecords: return "InsufficientRecords";
    case ErrorKind::InvariantViolated: return "InvariantViolated";
    case ErrorKind::PartialRunPersisted: return "PartialRunPersisted";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IOError: return "IOError";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateTriangle:
    case ErrorKind::SingularInterior:
    case ErrorKind::ConvergenceFailure:
    case ErrorKind::SamplingExhausted:
      return ErrorCategory::Solver;
    case ErrorKind::IOError:
    case ErrorKind::PartialRunPersisted:
      return ErrorCategory::IO;
    default:
      return ErrorCategory::Validation;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace steklov
