#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iwasawa {

enum class ErrorCode {
  kInvalidArgument,
  kStructureMismatch,
  kNotAResidue,
  kZeroInput,
  kNotPrincipal,
  kNonUnit,
  kDivisionByZero,
  kPrecisionExhausted,
  kAllZero,
  kNotFundamental,
  kBoundExceeded,
  kNotCoprime,
  kSchemaError,
  kInvariantViolation,
  kDivisibilityViolation,
  kEmbeddingMismatch,
  kDecompositionInvalid,
  kPIsLevel,
  kSearchExhausted,
  kMissingCoefficient,
  kNotDivisible,
  kHypothesisNotMet,
  kNegativeResult,
  kUnknownLocalTerm,
  kParityViolation,
  kPreconditionFailed,
  kUnsupported,
};

/// Upper-snake name used in reports, e.g. "NOT_A_RESIDUE".
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace iwasawa
