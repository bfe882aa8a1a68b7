#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aalg {

enum class ErrorCode {
  DimensionMismatch,
  AntisymmetryViolation,
  JacobiViolation,
  Singular,
  Degenerate,
  NotComplexStructure,
  NonIntegrable,
  IdealNotAbelian,
  JNotCompatible,
  NotAlmostAbelian,
  CommutationFailure,
  Precondition,
  NotAdmissible,
  BadDimension,
  ConstraintViolation,
  WitnessFailure,
  InexactSqrt,
  Syntax,
  IndexOutOfRange,
  UnboundParameter,
  Input,
};

std::string_view code_name(ErrorCode code) noexcept;

/// Base exception for every mathematical or input rejection raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace aalg
