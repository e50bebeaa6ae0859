#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iwasawa/eigenform.hpp"
#include "iwasawa/hypothesis.hpp"
#include "iwasawa/local_factors.hpp"
#include "iwasawa/quad_field.hpp"

namespace iwasawa {

/// User assertions about data outside coefficient reach.
struct Assertions {
  bool fg = false;
  bool mu = false;
  bool alpha_unit = false;
  bool imc_equality_f1 = false;
  bool imc_inclusion_f2 = false;
  // hypothesis names accepted whatever their verdict; each use is recorded
  std::vector<std::string> overrides;
};

/// Every verdict named in `names` must be HOLDS or overridden, else
/// HYPOTHESIS_NOT_MET listing all offenders. Returns the overrides used.
std::vector<std::string> require(const HypothesisReport& r, const std::vector<std::string>& names,
                                 const Assertions& a);

/// Sum of lambda over a term table; UNKNOWN_LOCAL_TERM if any term is uncertain.
int lambda_sum(const LocalSum& s);

struct TransferResult {
  long lambda_in = 0;
  long value = 0;
  int sum_from = 0, sum_to = 0;
  std::string equation;
};

/// lambda_in + sum(from) - sum(to) over Sigma_0. NEGATIVE_RESULT below zero.
TransferResult transfer_algebraic(long lambda_in, const LocalSum& from, const LocalSum& to);

/// 2 out = 2 lambda_in + sum(from) - sum(to) over the N3~ primes of each form.
/// PARITY_VIOLATION on an odd difference, NEGATIVE_RESULT below zero.
TransferResult transfer_analytic(long lambda_in, const LocalSum& from, const LocalSum& to);

/// Local term tables for a pair: Sigma_0 = primes of N1+ N2+ for both forms,
/// and each form's own N3~ primes at the common level.
struct PairTables {
  std::vector<long> sigma0;
  std::vector<long> n3_1, n3_2;
  LocalSum sigma0_1, sigma0_2, n3_1_terms, n3_2_terms;
};

PairTables local_tables(const EigenformRecord& f1, const EigenformRecord& f2, const QuadFieldContext& ctx,
                        const HypothesisReport& hyp, int M, int D = 64);

enum class ImcStatus { kPropagated, kConflict, kParityViolation };

std::string to_string(ImcStatus s);

struct ImcInput {
  long lambda_sel = 0;  // lambda of the dual Selmer group of f1
  long lambda_L = 0;    // lambda of the p-adic L-function of f1
  bool equality_f1 = false;
  bool inclusion_f2 = false;
};

struct ImcVerdict {
  ImcStatus status = ImcStatus::kConflict;
  std::optional<long> lambda_sel2, lambda_L2;
  std::string equation;  // the failing equation, on CONFLICT
  std::vector<std::string> steps;
};

/// Both transfers, then lambda(Sel_2) = 2 lambda(L_2). Checks lambda(Sel_1) =
/// 2 lambda(L_1) and, per form, that the Sigma_0 and N3~ sums agree.
/// HYPOTHESIS_NOT_MET when a flag is missing.
ImcVerdict imc_propagate(const ImcInput& in, const PairTables& t);

struct HeegnerFactor {
  std::string kind;
  long prime = 0;
  PadicNumber value;
  bool flagged = false;
  std::string note;
};

struct HeegnerConstants {
  std::string label;
  std::vector<HeegnerFactor> factors;
  PadicNumber product;     // carries p^-2 from the p-factor
  PadicNumber normalized;  // p^2 * product, in O_v
  bool alpha_asserted = false;
  bool cf_verified = true;
};

/// c(f) (inert N1~/N2~ shapes), the M3 Euler values P_q(0)^2 and the p-factor
/// (1 - b_p/p + 1/p)^2, itemized. Logarithms of Heegner points are not computed.
HeegnerConstants heegner_constants(const EigenformRecord& f, const NtildeClassification& cls,
                                   const QuadFieldContext& ctx, bool alpha_asserted, int M);

enum class HeegnerVerdict { kCongruent, kNotCongruent, kUnknown };

std::string to_string(HeegnerVerdict v);

struct HeegnerComparison {
  HeegnerVerdict verdict = HeegnerVerdict::kUnknown;
  std::string lhs, rhs;  // normalized constants mod pi
  std::vector<std::string> reasons;
};

HeegnerComparison compare_heegner(const HeegnerConstants& a, const HeegnerConstants& b);

enum class CertificateSide { kAlgebraic, kAnalytic };

std::string to_string(CertificateSide s);

struct MuCertificate {
  CertificateSide side = CertificateSide::kAlgebraic;
  std::string reference_curve;  // "11a.2" or "19.a2"
  std::string reference_form;   // label of its twist by chi
  EisensteinVerdict descent;
  CongruenceVerdict congruence;
  std::vector<HypothesisVerdict> hypotheses;
  std::vector<std::string> steps;
  std::string conclusion;
};

/// mu = 0 for f from a partial Eisenstein descent by (chi, chi, N1, N2, N0).
/// PRECONDITION_FAILED naming the first failing precondition. `reference` is
/// the untwisted reference form (bundled tables when absent).
MuCertificate mu_certificate(const EigenformRecord& f, long chi, long N1, long N2, long N0,
                             const QuadFieldContext& ctx, CertificateSide side,
                             const std::optional<EigenformRecord>& reference = std::nullopt);

}  // namespace iwasawa
