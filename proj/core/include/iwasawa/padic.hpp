#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace iwasawa {

/**
 * The ring of integers O_v of a finite extension of Q_p with e, f <= 2.
 *
 * Elements are written in the integral basis t^i * pi^j (i < f, j < e) where
 * t^2 = nonresidue generates the unramified quadratic extension and the
 * uniformizer pi satisfies pi^2 = p in the ramified case. For e = f = 1 this
 * is Z_p and pi = p.
 */
struct LocalRing {
  long p = 3;
  int e = 1;
  int f = 1;
  long nonresidue = 0;

  /// Validates p (odd prime) and e, f in {1, 2}; picks the least non-residue when f = 2.
  static LocalRing make(long p, int e = 1, int f = 1);

  int rank() const { return e * f; }
  mpz_class residue_field_size() const;

  friend bool operator==(const LocalRing&, const LocalRing&) = default;
};

std::string to_string(const LocalRing& ring);

/// v(x) in pi-units, or AT_LEAST(M) when x vanishes at precision M.
struct Valuation {
  int value = 0;
  bool exact = true;

  static Valuation at_least(int m) { return {m, false}; }
  friend bool operator==(const Valuation&, const Valuation&) = default;
};

std::string to_string(const Valuation& v);

/**
 * Element of the fraction field of O_v known modulo pi^M (absolute precision M,
 * measured in pi-units).
 *
 * Stored as pi^shift * unit with the unit reduced modulo pi^(M - shift). A value
 * indistinguishable from zero keeps only its precision. Every operation computes
 * the precision of its result from the precisions and valuations of its inputs.
 * Values are immutable.
 */
class PadicNumber {
 public:
  PadicNumber() = default;

  static PadicNumber zero(const LocalRing& ring, int precision);
  static PadicNumber from_integer(const LocalRing& ring, const mpz_class& n, int precision);
  static PadicNumber from_rational(const LocalRing& ring, const mpq_class& q, int precision);
  /// Components in the basis t^i pi^j, index j * f + i.
  static PadicNumber from_components(const LocalRing& ring, std::vector<mpz_class> components,
                                     int precision);
  static PadicNumber uniformizer(const LocalRing& ring, int precision);
  /// Inverse of to_string: "-12", "3/25", or "[c0,c1,...]" optionally followed by "/d".
  static PadicNumber parse(const LocalRing& ring, const std::string& text, int precision);

  const LocalRing& ring() const { return ring_; }
  int precision() const { return precision_; }
  Valuation valuation() const;
  bool is_zero() const { return zero_; }
  bool is_unit() const { return !zero_ && shift_ == 0; }
  bool is_integral() const { return zero_ || shift_ >= 0; }

  /// Integral representative in the t^i pi^j basis, reduced modulo pi^M.
  std::vector<mpz_class> components() const;
  /// True when the value lies in Z_p (all components but the first vanish).
  bool in_base_ring() const;
  /// Representative in [0, p^ceil(M/e)) of a value in Z_p.
  mpz_class integer_representative() const;
  /// Residue class modulo pi as components in [0, p); requires integrality.
  std::vector<long> residue() const;

  PadicNumber with_precision(int precision) const;
  PadicNumber inverse() const;
  PadicNumber pow(const mpz_class& exponent) const;
  PadicNumber pow(long exponent) const { return pow(mpz_class(exponent)); }

  /// Canonical text: decimal representative, "num/den" for negative valuation,
  /// or a bracketed component list when rank > 1.
  std::string to_string() const;

  friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator-(const PadicNumber& a);

 private:
  PadicNumber(const LocalRing& ring, int shift, std::vector<mpz_class> digits, int precision);

  LocalRing ring_{};
  bool zero_ = true;
  int shift_ = 0;
  std::vector<mpz_class> unit_;
  int precision_ = 0;
};

/// a == b modulo pi^k; nullopt when the precision of a - b does not reach k.
std::optional<bool> congruent(const PadicNumber& a, const PadicNumber& b, int k);

/// v_p(n) for n != 0.
int padic_valuation(const mpz_class& n, long p);

/// Square root with s^2 = a to full precision. The root whose residue lies in
/// {1, ..., (p-1)/2} is returned (lexicographically on the t-component first
/// when f = 2).
PadicNumber hensel_sqrt(const PadicNumber& a);

/// log(u) for u = 1 mod pi. The result's precision is the guaranteed output
/// precision after the division losses of the series.
PadicNumber padic_log(const PadicNumber& u);

/// The (p^f - 1)-th root of unity congruent to the unit u modulo pi.
PadicNumber teichmuller_part(const PadicNumber& u);

/// Square root of a modulo an odd prime p; nullopt for non-residues.
std::optional<long> sqrt_mod_prime(long a, long p);

bool is_prime(long n);

}  // namespace iwasawa
