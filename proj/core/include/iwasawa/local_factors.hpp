#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iwasawa/eigenform.hpp"
#include "iwasawa/quad_field.hpp"
#include "iwasawa/series.hpp"

namespace iwasawa {

enum class ReductionClass { kGood, kMultiplicative, kAdditive };

std::string to_string(ReductionClass c);

/// det(1 - X Frob | V^I) at q: [1, -a_q, q], [1, -a_q] or [1].
struct EulerPolynomial {
  long prime = 0;
  ReductionClass cls = ReductionClass::kGood;
  std::vector<Coefficient> coeffs;
  std::vector<std::string> warnings;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Classification by the exact power of q in f.level. P_IS_LEVEL when q = p.
EulerPolynomial euler_poly(const EigenformRecord& f, long q, const QuadFieldContext& ctx);

/// gamma_l = gamma_0^u in Gamma^ac, gamma_0 normalised by log gamma_0 = log(1 + p).
struct FrobeniusExponent {
  long prime = 0;
  PadicNumber u;
  int vp_u = 0;
  // alpha = (x + y sqrt(d)) / 2 generating l^h
  mpz_class x, y;
  std::string sign_convention;
  bool certain = true;
};

inline constexpr long kNormSearchCap = 50'000'000;

/// alpha = (x + y sqrt(d))/2 with (alpha) = l^h, l = (q, (b + sqrt(d))/2) for
/// the least b >= 0, by exhaustive search over |y|. SEARCH_EXHAUSTED when the
/// y bound exceeds `cap` or nothing is found.
std::pair<mpz_class, mpz_class> generator_by_search(long q, const QuadFieldContext& ctx, long cap = kNormSearchCap);

/// The same generator from l^h by composition and reduction of forms.
std::pair<mpz_class, mpz_class> generator_by_composition(long q, const QuadFieldContext& ctx);

/// Norm search (composition past the search cap), beta = alpha / alpha-bar, Teichmuller stripping, then
/// u = log(beta) / (h log(1 + p)). u is returned to precision M.
/// SEARCH_EXHAUSTED, PRECISION_EXHAUSTED.
FrobeniusExponent frobenius_exponent(long q, const QuadFieldContext& ctx, int M);

/// The conjugate prime: u -> -u.
FrobeniusExponent conjugate(const FrobeniusExponent& u);

struct LocalTerm {
  long prime = 0;
  bool split = true;
  int conjugate = 0;  // 0 for l, 1 for l-bar
  ReductionClass cls = ReductionClass::kGood;
  std::optional<int> vp_u;
  IwasawaElement series;
  MuLambda invariants;
  std::string source;
  std::vector<std::string> flags;
};

/// Truncation degree for a term: max(64, p^{v_p(u)} deg P + 8).
int local_term_degree(const EulerPolynomial& P, const FrobeniusExponent& u, long p);

/// P(q^{-1} (1 + T)^u) to degree D at precision M (pi-units of the form's
/// coefficient ring).
LocalTerm local_term(const EulerPolynomial& P, const FrobeniusExponent& u, int D, int M,
                     const LocalRing& ring);

/// Inert prime l = (q): N(l) = q^2 and gamma_l = 1, so the term is the
/// constant det(1 - q^{-2} Frob_q^2 | V^I). It carries lambda = 0.
LocalTerm inert_local_term(const EulerPolynomial& P, int D, int M, const LocalRing& ring);

struct LocalSum {
  std::optional<int> total;  // nullopt when any term is precision limited
  std::vector<LocalTerm> terms;
};

/// Sum of lambda(P_l) over all primes l of K above the listed rational primes.
LocalSum sum_local_lambdas(const EigenformRecord& f, const std::vector<long>& primes, const QuadFieldContext& ctx,
                           int M, int D = 64);

}  // namespace iwasawa
