#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iwasawa/padic.hpp"

namespace iwasawa {

/// Precision bookkeeping carried by every series.
struct PrecisionLedger {
  int nominal = 0;         // coefficient precision M
  bool exhausted = false;  // every coefficient is indistinguishable from 0 at M
  // Lower bound for v(c_k), k > D, of the element being approximated; nullopt
  // means those coefficients are known to vanish (the element is a polynomial).
  std::optional<int> tail_bound;
};

enum class Certainty { kCertain, kPrecisionLimited };

std::string to_string(Certainty c);

struct MuLambda {
  std::optional<int> mu;
  std::optional<int> lambda;
  Certainty certainty = Certainty::kPrecisionLimited;

  bool certain() const { return certainty == Certainty::kCertain; }
};

/**
 * Truncation c_0 + c_1 T + ... + c_D T^D of an element of O_v[[T]], T = gamma_0 - 1.
 *
 * All coefficients share the precision M. Products and substitutions are valid
 * to degree D; what is lost above D is summarised by the ledger's tail bound.
 */
class IwasawaElement {
 public:
  IwasawaElement() = default;
  IwasawaElement(const LocalRing& ring, std::vector<PadicNumber> coeffs, int precision,
                 std::optional<int> tail_bound = std::nullopt);

  static IwasawaElement constant(const PadicNumber& c, int degree);
  static IwasawaElement from_integers(const LocalRing& ring, const std::vector<mpz_class>& coeffs,
                                      int degree, int precision);
  static IwasawaElement one(const LocalRing& ring, int degree, int precision);

  const LocalRing& ring() const { return ring_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  int precision() const { return ledger_.nominal; }
  const PrecisionLedger& ledger() const { return ledger_; }
  const PadicNumber& coeff(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
  const std::vector<PadicNumber>& coefficients() const { return coeffs_; }
  bool is_polynomial() const { return !ledger_.tail_bound.has_value(); }

  /// Same element known only to degree `degree` and precision `precision`.
  IwasawaElement truncated(int degree, int precision) const;

  /// {p, e, f, M, D, coeffs, tail_bound?} with coefficients as decimal strings.
  std::string to_json() const;
  static IwasawaElement from_json(const std::string& text);

  friend IwasawaElement operator+(const IwasawaElement& a, const IwasawaElement& b);
  friend IwasawaElement operator-(const IwasawaElement& a, const IwasawaElement& b);
  friend IwasawaElement operator*(const IwasawaElement& a, const IwasawaElement& b);
  friend IwasawaElement operator*(const PadicNumber& c, const IwasawaElement& a);

 private:
  LocalRing ring_{};
  std::vector<PadicNumber> coeffs_;
  PrecisionLedger ledger_{};
};

/// sum_{k<=D} binom(u, k) T^k, the truncation of (1+T)^u for u in Z_p.
IwasawaElement binomial_series(const PadicNumber& u, int degree, int precision);

/// mu = min v(c_i), lambda = first index attaining it. Throws ALL_ZERO when
/// every coefficient vanishes at the working precision.
MuLambda mu_lambda(const IwasawaElement& F);

/// F((1+T)^2 - 1).
IwasawaElement doubling_map(const IwasawaElement& F);

/// F((1+T)^-1 - 1).
IwasawaElement inversion_involution(const IwasawaElement& F);

}  // namespace iwasawa
