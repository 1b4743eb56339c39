#pragma once

#include <stdexcept>
#include <string>

namespace steklov {

enum class ErrorKind {
  InvalidParams,
  DegreeMismatch,
  DuplicateEdge,
  SelfLoop,
  OddTotalDegree,
  DimensionMismatch,
  NotConnected,
  SamplingExhausted,
  MeshInvariantViolated,
  OrientationConflict,
  NonIntegerGenus,
  NonIntegerResult,
  DegenerateTriangle,
  UnknownLoop,
  SingularInterior,
  ConvergenceFailure,
  ZeroBoundaryNorm,
  InsufficientRecords,
  InvariantViolated,
  PartialRunPersisted,
  ParseError,
  IOError,
};

// Coarse grouping used by the command-line tool to pick an exit status.
enum class ErrorCategory { Usage, Validation, Solver, IO };

const char* to_string(ErrorKind kind);
ErrorCategory category_of(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace steklov
