#pragma once

#include <string>
#include <vector>

#include "iwasawa/eigenform.hpp"
#include "iwasawa/quad_field.hpp"
#include "iwasawa/verdict.hpp"

namespace iwasawa {

struct Evidence {
  std::string place;  // "p", "q=13", ...
  Verdict verdict = Verdict::kUnknown;
  std::string criterion;
  std::string detail;
};

struct HypothesisVerdict {
  std::string name;  // "H0", "div", "sq-fr", "unit", "GHH", "Cong", ...
  std::string subject;  // form label
  Verdict verdict = Verdict::kUnknown;
  std::vector<Evidence> evidence;
  std::string citation;
};

/// (div): if N- != 1 then p does not divide prod_{q | N} (q - 1) q (q + 1).
HypothesisVerdict check_div(const EigenformRecord& f, const LevelFactorization& fact, long p);

/// (sq-fr): if N- != 1 then N is squarefree.
HypothesisVerdict check_sqfree(const EigenformRecord& f, const LevelFactorization& fact);

/// (H0) at w | p N1- N2- via one-sided residual criteria. The places come from
/// the inert parts of both factorizations.
HypothesisVerdict check_H0(const EigenformRecord& f, const QuadFieldContext& ctx, const LevelFactorization& fact1,
                           const LevelFactorization& fact2);

enum class NtildeRole { kN1, kN2, kN3, kUnchanged };

std::string to_string(NtildeRole r);

struct NtildePrime {
  long prime = 0;
  NtildeRole role = NtildeRole::kUnchanged;
  PrimeBehaviour behaviour = PrimeBehaviour::kSplit;
};

struct NtildeClassification {
  long N = 1, N_prime = 1;
  long N1 = 1, N2 = 1, N3 = 1;
  // primes of N_j where the two forms' coefficients differ mod pi
  long M1 = 1, M2 = 1, M3 = 1;
  std::vector<NtildePrime> primes;

  std::vector<long> primes_with(NtildeRole r) const;
};

/// N1~ = inert q | N, q not dividing N'; N2~ = inert q | N' and q | N/N';
/// N3~ = split q | N/N'. NOT_DIVISIBLE unless N' | N.
NtildeClassification classify_ntilde(long N, long N_prime, const QuadFieldContext& ctx);

/// Fills M1, M2, M3 from the primes where b_q(f1) != b_q(f2) mod pi.
void refine_relaxed(NtildeClassification& cls, const std::vector<long>& mismatch_primes);

/// (1 + q - b)(1 + q + b) for an N1~ prime, (q - b)(q + b) for an N2~ prime,
/// each computed as a product of its two linear factors.
Coefficient unit_factor(long q, const Coefficient& b, NtildeRole role);

/// (unit): the product of the N1~ and N2~ factors is a unit in O_v.
HypothesisVerdict check_unit_condition(const EigenformRecord& f, const NtildeClassification& cls,
                                       const LocalRing& ring);

enum class LevelStrategy { kSquare, kRelaxed };

std::string to_string(LevelStrategy s);

/// SQUARE: lcm with every exponent rounded up to even. RELAXED: lcm with q^2
/// forced only at the listed mismatch primes.
long choose_common_level(long N1, long N2, LevelStrategy strategy, const std::vector<long>& mismatch_primes = {});

struct HypothesisReport {
  std::vector<HypothesisVerdict> verdicts;
  CongruenceVerdict congruence;
  LevelFactorization fact1, fact2;
  long common_level = 1;
  LevelStrategy strategy = LevelStrategy::kRelaxed;
  NtildeClassification cls1, cls2;
  // asserted by the user, never computed
  bool fg = false, mu = false, alpha_unit = false;

  /// First verdict with this name (and subject, when given).
  const HypothesisVerdict* find(const std::string& name, const std::string& subject = "") const;
  Verdict overall() const;
};

/// GHH, Cong, H0, div, sq-fr and unit for both forms. The common level comes
/// from the congruence's level mismatches under the chosen strategy.
HypothesisReport assess_pair(const EigenformRecord& f1, const EigenformRecord& f2, const QuadFieldContext& ctx,
                             LevelStrategy strategy = LevelStrategy::kRelaxed);

}  // namespace iwasawa
