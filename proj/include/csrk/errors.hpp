#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csrk {

enum class ErrorKind {
  ConsistencyViolation,
  Order4ConstraintViolation,
  SkewConflict,
  ParityViolation,
  InvalidArgument,
  CapExceeded,
  PreconditionViolation,
  HypothesisViolation,
  NonConvergence,
  NonFinite,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Process exit code for a failure of the given kind:
/// 1 domain error, 2 I/O or parse error, 3 solver failure.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace csrk
