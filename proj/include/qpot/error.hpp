#pragma once

#include <stdexcept>
#include <string>

namespace qpot {

enum class ErrorCode {
  InvalidGrid,
  GridTooCoarse,
  GridMismatch,
  NonFiniteField,
  NotSymmetric,
  NotPositiveDefinite,
  DimensionMismatch,
  DegreeOutOfRange,
  InvalidOrder,
  ArgumentOutOfDomain,
  OrderOutOfRange,
  NotNormalized,
  UnwrapFailure,
  BoxTooSmall,
  NotSymplectic,
  ExpDivergence,
  SingularBlock,
  DegenerateTestFunction,
  NodeDominatedState,
  OutOfRange,
  WrongDimension,
  ClassicalCorrelationsPresent,
  DimensionUnsupported,
  MaskDominated,
  PhaseMissing,
  TruncationInsufficient,
  InvalidMixture,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code);

// All library failures surface as this type; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace qpot
