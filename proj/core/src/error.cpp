#include "iwasawa/error.hpp"

namespace iwasawa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kStructureMismatch: return "STRUCTURE_MISMATCH";
    case ErrorCode::kNotAResidue: return "NOT_A_RESIDUE";
    case ErrorCode::kZeroInput: return "ZERO_INPUT";
    case ErrorCode::kNotPrincipal: return "NOT_PRINCIPAL";
    case ErrorCode::kNonUnit: return "NON_UNIT";
    case ErrorCode::kDivisionByZero: return "DIVISION_BY_ZERO";
    case ErrorCode::kPrecisionExhausted: return "PRECISION_EXHAUSTED";
    case ErrorCode::kAllZero: return "ALL_ZERO";
    case ErrorCode::kNotFundamental: return "NOT_FUNDAMENTAL";
    case ErrorCode::kBoundExceeded: return "BOUND_EXCEEDED";
    case ErrorCode::kNotCoprime: return "NOT_COPRIME";
    case ErrorCode::kSchemaError: return "SCHEMA_ERROR";
    case ErrorCode::kInvariantViolation: return "INVARIANT_VIOLATION";
    case ErrorCode::kDivisibilityViolation: return "DIVISIBILITY_VIOLATION";
    case ErrorCode::kEmbeddingMismatch: return "EMBEDDING_MISMATCH";
    case ErrorCode::kDecompositionInvalid: return "DECOMPOSITION_INVALID";
    case ErrorCode::kPIsLevel: return "P_IS_LEVEL";
    case ErrorCode::kSearchExhausted: return "SEARCH_EXHAUSTED";
    case ErrorCode::kMissingCoefficient: return "MISSING_COEFFICIENT";
    case ErrorCode::kNotDivisible: return "NOT_DIVISIBLE";
    case ErrorCode::kHypothesisNotMet: return "HYPOTHESIS_NOT_MET";
    case ErrorCode::kNegativeResult: return "NEGATIVE_RESULT";
    case ErrorCode::kUnknownLocalTerm: return "UNKNOWN_LOCAL_TERM";
    case ErrorCode::kParityViolation: return "PARITY_VIOLATION";
    case ErrorCode::kPreconditionFailed: return "PRECONDITION_FAILED";
    case ErrorCode::kUnsupported: return "UNSUPPORTED";
  }
  return "UNKNOWN_ERROR";
}

}  // namespace iwasawa

#include "iwasawa/verdict.hpp"

namespace iwasawa {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "HOLDS";
    case Verdict::kFails: return "FAILS";
    case Verdict::kUnknown: return "UNKNOWN";
  }
  return "?";
}

}  // namespace iwasawa
