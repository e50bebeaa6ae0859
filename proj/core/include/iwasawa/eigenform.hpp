#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "iwasawa/padic.hpp"
#include "iwasawa/verdict.hpp"

namespace iwasawa {

/// A Fourier coefficient: an exact rational integer, or its image in O_v
/// known to finite precision.
class Coefficient {
 public:
  Coefficient() : value_(mpz_class(0)) {}
  Coefficient(long n) : value_(mpz_class(n)) {}
  Coefficient(const mpz_class& n) : value_(n) {}
  Coefficient(const PadicNumber& x) : value_(x) {}

  bool exact() const { return std::holds_alternative<mpz_class>(value_); }
  const mpz_class& integer() const;
  const PadicNumber& padic() const;
  bool is_exact_zero() const { return exact() && integer() == 0; }

  /// Image in O_v at precision `precision` (pi-units). EMBEDDING_MISMATCH if
  /// the coefficient already lives in a different ring.
  PadicNumber at(const LocalRing& ring, int precision) const;
  /// Image modulo pi; nullopt when a p-adic value is not known to precision 1.
  std::optional<bool> is_unit(const LocalRing& ring) const;

  std::string to_string() const;

  friend Coefficient operator+(const Coefficient& a, const Coefficient& b);
  friend Coefficient operator-(const Coefficient& a, const Coefficient& b);
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b);

 private:
  std::variant<mpz_class, PadicNumber> value_;
};

/// Equality where both values are known: exact comparison for integers,
/// congruence to the common precision otherwise (nullopt if that is 0).
std::optional<bool> agree(const Coefficient& a, const Coefficient& b);

/// a == b mod pi^k in O_v; nullopt when precision does not reach k.
std::optional<bool> congruent_mod(const Coefficient& a, const Coefficient& b, const LocalRing& ring,
                                  int k);

struct EigenformRecord {
  std::string label;
  long level = 1;
  int weight = 2;
  std::vector<Coefficient> an;  // an[n - 1] = a_n, n = 1..B
  std::optional<LocalRing> embedding;
  std::string provenance;
  // ord_q of the denominator of j(E) at multiplicative primes, when supplied
  std::map<long, int> j_denominator_valuations;
  std::vector<std::string> warnings;

  long bound() const { return static_cast<long>(an.size()); }
  bool has(long n) const { return n >= 1 && n <= bound(); }
  /// MISSING_COEFFICIENT when n > B.
  const Coefficient& a(long n) const;
};

/// Parses and validates a form file. SCHEMA_ERROR / INVARIANT_VIOLATION.
EigenformRecord load_form(const std::string& path);
EigenformRecord parse_form(const std::string& json_text);
/// Inverse of parse_form, keys sorted.
std::string to_json(const EigenformRecord& f);

/// Runs the record invariants (a_1 = 1, multiplicativity, Hecke recursion);
/// throws INVARIANT_VIOLATION naming the failing identity.
void validate(const EigenformRecord& f);

/// Builds a_1..a_B from prime coefficients: Hecke recursion at q not dividing
/// the level, a_{q^k} = a_q^k at level primes, then multiplicativity.
EigenformRecord build_form(const std::string& label, long level,
                           const std::map<long, Coefficient>& prime_coefficients, long bound,
                           std::optional<LocalRing> embedding = std::nullopt);

/// Bundled a_q tables (q < 10000) for the curves 11a and 19a.
EigenformRecord reference_form(const std::string& label, long bound);

/// Largest bound reference_form accepts for this label.
long reference_form_limit(const std::string& label);

/// chi_D(n) with chi_1 trivial.
int quadratic_character(long D, long n);

/// Twist by the quadratic character of the fundamental discriminant D.
EigenformRecord twist(const EigenformRecord& f, long D);

/// The level-N form with a_q = 0 for q | N/N' (N' = f.level).
EigenformRecord stabilize_fcheck(const EigenformRecord& f, long N);

/// ceil(2/12 * [SL2(Z) : Gamma0(N)]).
long sturm_bound(long N);

enum class OrdinarityTag { kWilesOrdinary, kBothNonordinary, kMixed, kUnavailable };

std::string to_string(OrdinarityTag t);

struct CongruenceVerdict {
  Verdict holds = Verdict::kUnknown;
  long required_bound = 0;  // sturm_bound(N p)
  long checked_bound = 0;
  int precision = 1;        // k, congruence modulo pi^k
  std::vector<long> witnesses;         // failing n
  std::vector<long> excluded_primes;
  std::vector<long> undecided;         // n whose comparison lacked precision
  // level primes q with a_q(f1) != a_q(f2) mod pi^k (the relaxed-level set)
  std::vector<long> level_mismatches;
  OrdinarityTag p_tag = OrdinarityTag::kUnavailable;
  std::vector<std::string> notes;
};

/// a_n(f1) == a_n(f2) mod pi^k for n <= sturm_bound(N p) coprime to the
/// primes of N (unless exclude_level_primes is false).
CongruenceVerdict check_congruence(const EigenformRecord& f1, const EigenformRecord& f2,
                                   const LocalRing& ring, int k, long N,
                                   bool exclude_level_primes = true);

enum class EisensteinFamily { kGeneric, kN1, kN2, kN0 };

std::string to_string(EisensteinFamily fam);

struct EisensteinCheck {
  long prime = 0;
  EisensteinFamily family = EisensteinFamily::kGeneric;
  std::string expected;  // phi(l) + l psi(l), phi(l), l psi(l) or 0
  std::optional<bool> holds;
};

struct EisensteinVerdict {
  Verdict holds = Verdict::kUnknown;
  long bound = 0;
  std::vector<EisensteinCheck> checks;
  std::vector<long> witnesses;
};

/// Partial Eisenstein descent by (phi, psi, N1, N2, N0) modulo pi^k, over all
/// primes l <= B. phi and psi are fundamental discriminants (1 = trivial).
EisensteinVerdict check_partial_eisenstein(const EigenformRecord& f, long phi, long psi, long N1,
                                           long N2, long N0, const LocalRing& ring, int k = 1);

}  // namespace iwasawa
