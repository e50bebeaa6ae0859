#include "iwasawa/series.hpp"

#include <algorithm>
#include <climits>
#include <json.hpp>

#include "iwasawa/error.hpp"

namespace iwasawa {

namespace {

using Tail = std::optional<int>;

Tail min_tail(Tail a, Tail b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

Tail add_tail(Tail a, int shift) {
  if (!a) return a;
  return *a + shift;
}

// Lower bound for v(c): exact valuation, or the precision when c vanishes.
int lower_valuation(const PadicNumber& c) { return c.valuation().value; }

int min_lower_valuation(const std::vector<PadicNumber>& cs, std::size_t from = 0) {
  int best = INT_MAX;
  for (std::size_t i = from; i < cs.size(); ++i) best = std::min(best, lower_valuation(cs[i]));
  return best;
}

// Lower bound for every coefficient of the full element, tail included.
int coefficient_floor(const IwasawaElement& a) {
  int m = min_lower_valuation(a.coefficients());
  if (a.ledger().tail_bound) m = std::min(m, *a.ledger().tail_bound);
  return m;
}

void require_same(const IwasawaElement& a, const IwasawaElement& b) {
  if (!(a.ring() == b.ring()))
    throw Error(ErrorCode::kStructureMismatch,
                "series over " + to_string(a.ring()) + " and " + to_string(b.ring()));
}

long floor_log(long p, long k) {
  long r = 0;
  for (long x = p; x <= k; x *= p) ++r;
  return r;
}

}  // namespace

std::string to_string(Certainty c) {
  return c == Certainty::kCertain ? "CERTAIN" : "PRECISION_LIMITED";
}

IwasawaElement::IwasawaElement(const LocalRing& ring, std::vector<PadicNumber> coeffs,
                               int precision, std::optional<int> tail_bound)
    : ring_(ring), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorCode::kInvalidArgument, "series needs at least one coefficient");
  int m = precision;
  for (const auto& c : coeffs_) {
    if (!(c.ring() == ring_)) throw Error(ErrorCode::kStructureMismatch, "coefficient ring differs");
    if (!c.is_integral()) throw Error(ErrorCode::kInvalidArgument, "coefficients must be integral");
    m = std::min(m, c.precision());
  }
  if (m < 1) throw Error(ErrorCode::kPrecisionExhausted, "series precision below 1");
  bool all_zero = true;
  for (auto& c : coeffs_) {
    c = c.with_precision(m);
    all_zero = all_zero && c.is_zero();
  }
  ledger_.nominal = m;
  ledger_.exhausted = all_zero;
  ledger_.tail_bound = tail_bound;
}

IwasawaElement IwasawaElement::constant(const PadicNumber& c, int degree) {
  std::vector<PadicNumber> cs(static_cast<std::size_t>(degree) + 1,
                              PadicNumber::zero(c.ring(), c.precision()));
  cs[0] = c;
  return IwasawaElement(c.ring(), std::move(cs), c.precision());
}

IwasawaElement IwasawaElement::from_integers(const LocalRing& ring,
                                             const std::vector<mpz_class>& coeffs, int degree,
                                             int precision) {
  std::vector<PadicNumber> cs;
  Tail tail;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    auto c = PadicNumber::from_integer(ring, coeffs[i], precision);
    if (static_cast<int>(i) <= degree)
      cs.push_back(c);
    else if (!c.is_zero())
      tail = min_tail(tail, lower_valuation(c));
  }
  while (static_cast<int>(cs.size()) <= degree) cs.push_back(PadicNumber::zero(ring, precision));
  return IwasawaElement(ring, std::move(cs), precision, tail);
}

IwasawaElement IwasawaElement::one(const LocalRing& ring, int degree, int precision) {
  return constant(PadicNumber::from_integer(ring, 1, precision), degree);
}

IwasawaElement IwasawaElement::truncated(int degree, int precision) const {
  // Unknown coefficients cannot be invented: only polynomials extend by zeros.
  if (!is_polynomial()) degree = std::min(degree, this->degree());
  Tail tail = ledger_.tail_bound;
  std::vector<PadicNumber> cs;
  for (int i = 0; i <= degree; ++i)
    cs.push_back(i <= this->degree() ? coeffs_[static_cast<std::size_t>(i)]
                                     : PadicNumber::zero(ring_, ledger_.nominal));
  for (int i = degree + 1; i <= this->degree(); ++i)
    tail = min_tail(tail, lower_valuation(coeffs_[static_cast<std::size_t>(i)]));
  return IwasawaElement(ring_, std::move(cs), std::min(precision, ledger_.nominal), tail);
}

IwasawaElement operator+(const IwasawaElement& a, const IwasawaElement& b) {
  require_same(a, b);
  int d = std::min(a.degree(), b.degree());
  int m = std::min(a.precision(), b.precision());
  IwasawaElement x = a.truncated(d, m), y = b.truncated(d, m);
  std::vector<PadicNumber> cs;
  cs.reserve(static_cast<std::size_t>(d) + 1);
  for (int i = 0; i <= d; ++i) cs.push_back(x.coeff(i) + y.coeff(i));
  return IwasawaElement(a.ring(), std::move(cs), m,
                        min_tail(x.ledger().tail_bound, y.ledger().tail_bound));
}

IwasawaElement operator-(const IwasawaElement& a, const IwasawaElement& b) {
  return a + (PadicNumber::from_integer(b.ring(), -1, b.precision()) * b);
}

IwasawaElement operator*(const IwasawaElement& a, const IwasawaElement& b) {
  require_same(a, b);
  const int d = std::min(a.degree(), b.degree());
  const int m = std::min(a.precision(), b.precision());
  IwasawaElement x = a.truncated(d, m), y = b.truncated(d, m);
  const auto& xs = x.coefficients();
  const auto& ys = y.coefficients();
  std::vector<PadicNumber> cs(static_cast<std::size_t>(d) + 1, PadicNumber::zero(a.ring(), m));
  for (int i = 0; i <= d; ++i) {
    if (xs[i].is_zero()) continue;
    for (int j = 0; i + j <= d; ++j) cs[i + j] = cs[i + j] + xs[i] * ys[j];
  }
  // Terms x_i y_j with i + j > d, bounded through suffix minima of y.
  std::vector<int> suffix(static_cast<std::size_t>(d) + 2, INT_MAX);
  for (int j = d; j >= 0; --j) suffix[j] = std::min(suffix[j + 1], lower_valuation(ys[j]));
  Tail tail;
  for (int i = 1; i <= d; ++i) {
    int s = suffix[static_cast<std::size_t>(d - i + 1)];
    if (s != INT_MAX) tail = min_tail(tail, lower_valuation(xs[i]) + s);
  }
  if (x.ledger().tail_bound) tail = min_tail(tail, *x.ledger().tail_bound + coefficient_floor(y));
  if (y.ledger().tail_bound) tail = min_tail(tail, *y.ledger().tail_bound + coefficient_floor(x));
  return IwasawaElement(a.ring(), std::move(cs), m, tail);
}

IwasawaElement operator*(const PadicNumber& c, const IwasawaElement& a) {
  if (!(c.ring() == a.ring())) throw Error(ErrorCode::kStructureMismatch, "scalar ring differs");
  if (!c.is_integral()) throw Error(ErrorCode::kInvalidArgument, "scalar must be integral");
  std::vector<PadicNumber> cs;
  cs.reserve(a.coefficients().size());
  for (const auto& x : a.coefficients()) cs.push_back(c * x);
  return IwasawaElement(a.ring(), std::move(cs), a.precision(),
                        add_tail(a.ledger().tail_bound, lower_valuation(c)));
}

IwasawaElement binomial_series(const PadicNumber& u, int degree, int precision) {
  const LocalRing& R = u.ring();
  if (degree < 0) throw Error(ErrorCode::kInvalidArgument, "negative degree");
  if (!u.is_integral() || !u.in_base_ring())
    throw Error(ErrorCode::kInvalidArgument, "binomial series needs u in Z_p");
  const int loss = R.e * static_cast<int>(floor_log(R.p, std::max(degree, 1)));
  if (u.precision() < precision + loss)
    throw Error(ErrorCode::kPrecisionExhausted,
                "u known to precision " + std::to_string(u.precision()) + ", need " +
                    std::to_string(precision + loss) + " for degree " + std::to_string(degree));
  // binom(U, k) for the integer representative U agrees with binom(u, k) modulo
  // p^(n - floor(log_p k)) when U = u mod p^n.
  mpz_class U = u.integer_representative();
  std::vector<PadicNumber> cs;
  cs.reserve(static_cast<std::size_t>(degree) + 1);
  mpz_class b;
  for (int k = 0; k <= degree; ++k) {
    mpz_bin_ui(b.get_mpz_t(), U.get_mpz_t(), static_cast<unsigned long>(k));
    cs.push_back(PadicNumber::from_integer(R, b, precision));
  }
  return IwasawaElement(R, std::move(cs), precision, 0);
}

MuLambda mu_lambda(const IwasawaElement& F) {
  std::optional<int> mu;
  int lambda = -1;
  for (int i = 0; i <= F.degree(); ++i) {
    Valuation v = F.coeff(i).valuation();
    if (v.exact && (!mu || v.value < *mu)) {
      mu = v.value;
      lambda = i;
    }
  }
  if (!mu)
    throw Error(ErrorCode::kAllZero, "every coefficient is 0 modulo pi^" +
                                         std::to_string(F.precision()));
  MuLambda out;
  const auto& tail = F.ledger().tail_bound;
  if (tail && *tail < *mu) return out;
  out.mu = mu;
  out.lambda = lambda;
  out.certainty = Certainty::kCertain;
  return out;
}

namespace {

// Horner evaluation of F(S) with S(0) = 0, where `times_s` multiplies a
// truncated coefficient vector by S in O(D).
template <typename TimesS>
IwasawaElement substitute(const IwasawaElement& F, TimesS times_s) {
  const int d = F.degree();
  const int m = F.precision();
  const LocalRing& R = F.ring();
  std::vector<PadicNumber> acc(static_cast<std::size_t>(d) + 1, PadicNumber::zero(R, m));
  for (int k = d; k >= 0; --k) {
    acc = times_s(acc);
    acc[0] = acc[0] + F.coeff(k);
  }
  // Everything above degree d comes from c_k S^k, k >= 1, with S integral.
  Tail tail = F.ledger().tail_bound;
  int floor = min_lower_valuation(F.coefficients(), 1);
  if (floor != INT_MAX && d >= 1) tail = min_tail(tail, floor);
  return IwasawaElement(R, std::move(acc), m, tail);
}

}  // namespace

IwasawaElement doubling_map(const IwasawaElement& F) {
  const PadicNumber two = PadicNumber::from_integer(F.ring(), 2, F.precision());
  // S = 2T + T^2
  return substitute(F, [&](const std::vector<PadicNumber>& r) {
    std::vector<PadicNumber> out(r.size(), PadicNumber::zero(F.ring(), F.precision()));
    for (std::size_t m = 1; m < r.size(); ++m) {
      out[m] = two * r[m - 1];
      if (m >= 2) out[m] = out[m] + r[m - 2];
    }
    return out;
  });
}

IwasawaElement inversion_involution(const IwasawaElement& F) {
  // S = -T / (1 + T): negate-shift, then divide by 1 + T via g_m = h_m - g_{m-1}.
  return substitute(F, [&](const std::vector<PadicNumber>& r) {
    std::vector<PadicNumber> out(r.size(), PadicNumber::zero(F.ring(), F.precision()));
    for (std::size_t m = 1; m < r.size(); ++m) out[m] = -r[m - 1] - out[m - 1];
    return out;
  });
}

std::string IwasawaElement::to_json() const {
  nlohmann::json j;
  j["p"] = std::to_string(ring_.p);
  j["e"] = std::to_string(ring_.e);
  j["f"] = std::to_string(ring_.f);
  j["M"] = std::to_string(ledger_.nominal);
  j["D"] = std::to_string(degree());
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : coeffs_) cs.push_back(c.to_string());
  j["coeffs"] = cs;
  if (ledger_.tail_bound) j["tail_bound"] = std::to_string(*ledger_.tail_bound);
  return j.dump();
}

namespace {

long json_int(const nlohmann::json& j, const char* key, std::optional<long> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw Error(ErrorCode::kSchemaError, std::string("missing field '") + key + "'");
  }
  const auto& v = j.at(key);
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_string()) {
    try {
      std::size_t used = 0;
      long x = std::stol(v.get<std::string>(), &used);
      if (used == v.get<std::string>().size()) return x;
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorCode::kSchemaError, std::string("field '") + key + "' is not an integer");
}

}  // namespace

IwasawaElement IwasawaElement::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, e.what());
  }
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array())
    throw Error(ErrorCode::kSchemaError, "series JSON needs a coeffs array");
  LocalRing R = LocalRing::make(json_int(j, "p"), static_cast<int>(json_int(j, "e", 1)),
                                static_cast<int>(json_int(j, "f", 1)));
  int m = static_cast<int>(json_int(j, "M"));
  int d = static_cast<int>(json_int(j, "D", static_cast<long>(j["coeffs"].size()) - 1));
  std::vector<PadicNumber> cs;
  for (const auto& c : j["coeffs"]) {
    if (c.is_number_integer())
      cs.push_back(PadicNumber::from_integer(R, c.get<long>(), m));
    else if (c.is_string())
      cs.push_back(PadicNumber::parse(R, c.get<std::string>(), m));
    else
      throw Error(ErrorCode::kSchemaError, "coefficient must be an integer or a string");
  }
  if (cs.empty()) throw Error(ErrorCode::kSchemaError, "empty coeffs");
  Tail tail;
  if (j.contains("tail_bound")) tail = static_cast<int>(json_int(j, "tail_bound"));
  IwasawaElement F(R, std::move(cs), m, tail);
  return F.truncated(d, m);
}

}  // namespace iwasawa
