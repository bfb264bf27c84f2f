#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pconf {

enum class ErrorCode {
  kNonMonotoneInput,
  kBadDomain,
  kOutOfDomain,
  kOutOfRange,
  kRangeMismatch,
  kNotInvertible,
  kBadSpec,
  kNotInC,
  kBranchNotInvertible,
  kInvalidPair,
  kMaxIterExceeded,
  kNotStrictlyIncreasing,
  kAnchorsNotFixed,
  kScaleBelowGrid,
  kPrecondition,
  kBuildFailure,
  kDyadicCheckFailure,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonMonotoneInput: return "NonMonotoneInput";
    case ErrorCode::kBadDomain: return "BadDomain";
    case ErrorCode::kOutOfDomain: return "OutOfDomain";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kRangeMismatch: return "RangeMismatch";
    case ErrorCode::kNotInvertible: return "NotInvertible";
    case ErrorCode::kBadSpec: return "BadSpec";
    case ErrorCode::kNotInC: return "NotInC";
    case ErrorCode::kBranchNotInvertible: return "BranchNotInvertible";
    case ErrorCode::kInvalidPair: return "InvalidPair";
    case ErrorCode::kMaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::kNotStrictlyIncreasing: return "NotStrictlyIncreasing";
    case ErrorCode::kAnchorsNotFixed: return "AnchorsNotFixed";
    case ErrorCode::kScaleBelowGrid: return "ScaleBelowGrid";
    case ErrorCode::kPrecondition: return "Precondition";
    case ErrorCode::kBuildFailure: return "BuildFailure";
    case ErrorCode::kDyadicCheckFailure: return "DyadicCheckFailure";
  }
  return "Unknown";
}

}  // namespace pconf
