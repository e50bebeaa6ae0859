#include "iwasawa/eigenform.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "iwasawa/error.hpp"
#include "iwasawa/quad_field.hpp"

namespace iwasawa {

namespace {

struct PrimeCoefficient {
  long p;
  long a;
};

#include "reference_tables.inc"

using nlohmann::json;

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorCode::kSchemaError, msg); }

[[noreturn]] void violation(const std::string& msg) { throw Error(ErrorCode::kInvariantViolation, msg); }

// Exact integers are carried at this many pi-digits beyond the other operand
// when mixed with a p-adic value; any amount >= the valuation works.
int mixed_precision(const mpz_class& n, const PadicNumber& other) {
  int extra = n == 0 ? 0 : padic_valuation(n, other.ring().p) * other.ring().e;
  return other.precision() + extra;
}

// pi-adic digits, least significant first; a digit of O_v / pi = F_{p^f} is
// "a" or "a:b" (a + b t).
std::string digit_string(const PadicNumber& x) {
  const LocalRing& R = x.ring();
  auto c = x.components();
  std::string out;
  mpz_class p = R.p;
  for (int k = 0; k < x.precision(); ++k) {
    int j = k % R.e, m = k / R.e;
    if (k) out += '.';
    for (int i = 0; i < R.f; ++i) {
      mpz_class d = c[static_cast<std::size_t>(j * R.f + i)];
      for (int s = 0; s < m; ++s) d /= p;
      d %= p;
      if (i) out += ':';
      out += d.get_str();
    }
  }
  return out;
}

PadicNumber parse_digits(const LocalRing& R, const std::string& text) {
  std::vector<mpz_class> c(static_cast<std::size_t>(R.rank()));
  std::stringstream ss(text);
  std::string digit;
  int k = 0;
  while (std::getline(ss, digit, '.')) {
    std::stringstream ds(digit);
    std::string part;
    int i = 0;
    int j = k % R.e, m = k / R.e;
    while (std::getline(ds, part, ':')) {
      if (i >= R.f || part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
        schema("bad digit '" + digit + "' in '" + text + "'");
      long d = std::stol(part);
      if (d >= R.p) schema("digit " + part + " out of range for p = " + std::to_string(R.p));
      mpz_class pm;
      mpz_ui_pow_ui(pm.get_mpz_t(), static_cast<unsigned long>(R.p), static_cast<unsigned long>(m));
      c[static_cast<std::size_t>(j * R.f + i)] += d * pm;
      ++i;
    }
    if (i == 0) schema("empty digit in '" + text + "'");
    ++k;
  }
  if (k == 0) schema("empty digit string");
  return PadicNumber::from_components(R, std::move(c), k);
}

std::vector<long> prime_divisors(long n) {
  std::vector<long> out;
  for (auto [q, e] : factorize(std::labs(n))) out.push_back(q);
  return out;
}

bool divides_any(long n, const std::vector<long>& primes) {
  for (long q : primes)
    if (n % q == 0) return true;
  return false;
}

// Smallest prime factor for 2..B.
std::vector<long> spf_table(long B) {
  std::vector<long> spf(static_cast<std::size_t>(B) + 1, 0);
  for (long i = 2; i <= B; ++i) {
    if (spf[static_cast<std::size_t>(i)]) continue;
    for (long j = i; j <= B; j += i)
      if (!spf[static_cast<std::size_t>(j)]) spf[static_cast<std::size_t>(j)] = i;
  }
  return spf;
}

std::string idx(long n) { return "a_" + std::to_string(n); }

}  // namespace

const mpz_class& Coefficient::integer() const {
  if (!exact()) throw Error(ErrorCode::kInvalidArgument, "coefficient is not an exact integer");
  return std::get<mpz_class>(value_);
}

const PadicNumber& Coefficient::padic() const {
  if (exact()) throw Error(ErrorCode::kInvalidArgument, "coefficient is an exact integer");
  return std::get<PadicNumber>(value_);
}

PadicNumber Coefficient::at(const LocalRing& ring, int precision) const {
  if (exact()) return PadicNumber::from_integer(ring, integer(), precision);
  const PadicNumber& x = padic();
  if (!(x.ring() == ring))
    throw Error(ErrorCode::kEmbeddingMismatch,
                "coefficient lives in " + iwasawa::to_string(x.ring()) + ", not " + iwasawa::to_string(ring));
  return x.with_precision(precision);
}

std::optional<bool> Coefficient::is_unit(const LocalRing& ring) const {
  PadicNumber x = at(ring, 1);
  if (x.precision() < 1) return std::nullopt;
  return x.is_unit();
}

std::string Coefficient::to_string() const {
  if (exact()) return integer().get_str();
  return digit_string(padic());
}

Coefficient operator+(const Coefficient& a, const Coefficient& b) {
  if (a.exact() && b.exact()) return Coefficient(mpz_class(a.integer() + b.integer()));
  if (a.exact()) return Coefficient(PadicNumber::from_integer(b.padic().ring(), a.integer(), b.padic().precision()) + b.padic());
  if (b.exact()) return b + a;
  return Coefficient(a.padic() + b.padic());
}

Coefficient operator-(const Coefficient& a, const Coefficient& b) {
  if (b.exact()) return a + Coefficient(mpz_class(-b.integer()));
  return a + Coefficient(-b.padic());
}

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
  if (a.exact() && b.exact()) return Coefficient(mpz_class(a.integer() * b.integer()));
  if (a.is_exact_zero() || b.is_exact_zero()) return Coefficient(0L);
  if (a.exact()) {
    const PadicNumber& y = b.padic();
    return Coefficient(PadicNumber::from_integer(y.ring(), a.integer(), mixed_precision(a.integer(), y)) * y);
  }
  if (b.exact()) return b * a;
  return Coefficient(a.padic() * b.padic());
}

std::optional<bool> agree(const Coefficient& a, const Coefficient& b) {
  if (a.exact() && b.exact()) return a.integer() == b.integer();
  const LocalRing& R = a.exact() ? b.padic().ring() : a.padic().ring();
  int k = std::min(a.exact() ? b.padic().precision() : a.padic().precision(),
                   b.exact() ? a.padic().precision() : b.padic().precision());
  if (k < 1) return std::nullopt;
  return congruent(a.at(R, k), b.at(R, k), k);
}

std::optional<bool> congruent_mod(const Coefficient& a, const Coefficient& b, const LocalRing& ring, int k) {
  return congruent(a.at(ring, k), b.at(ring, k), k);
}

const Coefficient& EigenformRecord::a(long n) const {
  if (!has(n))
    throw Error(ErrorCode::kMissingCoefficient,
                label + ": " + idx(n) + " is beyond the coefficient bound " + std::to_string(bound()));
  return an[static_cast<std::size_t>(n - 1)];
}

long sturm_bound(long N) {
  if (N < 1) throw Error(ErrorCode::kInvalidArgument, "level must be positive");
  // index = N prod (1 + 1/q), an integer
  long index = N;
  for (long q : prime_divisors(N)) index = index / q * (q + 1);
  return (index + 5) / 6;
}

int quadratic_character(long D, long n) {
  if (D == 1) return 1;
  return kronecker(D, n);
}

void validate(const EigenformRecord& f) {
  if (f.weight != 2) schema("weight must be 2, got " + std::to_string(f.weight));
  if (f.an.empty()) schema("no coefficients");
  auto same = [](const Coefficient& x, const Coefficient& y) {
    auto r = agree(x, y);
    return !r.has_value() || *r;
  };
  if (agree(f.a(1), Coefficient(1L)) != true) violation("a_1 = " + f.a(1).to_string() + ", expected 1");
  const long B = f.bound();
  auto spf = spf_table(B);
  // a_n = a_{q^k} a_m with q the least prime of n, q^k || n
  for (long n = 2; n <= B; ++n) {
    long q = spf[static_cast<std::size_t>(n)], qk = 1, m = n;
    while (m % q == 0) {
      m /= q;
      qk *= q;
    }
    if (m == 1) continue;
    if (!same(f.a(n), f.a(qk) * f.a(m)))
      violation(f.label + ": multiplicativity " + idx(n) + " = " + idx(qk) + " * " + idx(m) + " fails");
  }
  const long p = f.embedding ? f.embedding->p : 0;
  for (long q = 2; q * q <= B; ++q) {
    if (spf[static_cast<std::size_t>(q)] != q || q == p) continue;
    const bool bad = f.level % q == 0;
    for (long prev = 1, cur = q; cur * q <= B; prev = cur, cur *= q) {
      Coefficient expect = bad ? f.a(q) * f.a(cur) : f.a(q) * f.a(cur) - Coefficient(q) * f.a(prev);
      if (!same(f.a(cur * q), expect))
        violation(f.label + ": Hecke recursion at " + std::to_string(q) + " fails for " + idx(cur * q) + " = " +
                  (bad ? idx(q) + " * " + idx(cur) : idx(q) + " * " + idx(cur) + " - " + std::to_string(q) + " * " + idx(prev)));
    }
  }
}

EigenformRecord parse_form(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    schema(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) schema("form file must be a JSON object");
  EigenformRecord f;
  if (!j.contains("label") || !j["label"].is_string()) schema("'label' must be a string");
  f.label = j["label"].get<std::string>();
  if (!j.contains("level") || !j["level"].is_number_integer() || j["level"].get<long>() < 1)
    schema("'level' must be a positive integer");
  f.level = j["level"].get<long>();
  if (!j.contains("weight") || !j["weight"].is_number_integer()) schema("'weight' must be an integer");
  if (j["weight"].get<long>() != 2) schema("weight must be 2, got " + j["weight"].dump());
  if (j.contains("provenance")) {
    if (!j["provenance"].is_string()) schema("'provenance' must be a string");
    f.provenance = j["provenance"].get<std::string>();
  }
  if (j.contains("embedding")) {
    const json& e = j["embedding"];
    if (!e.is_object() || !e.contains("p") || !e["p"].is_number_integer())
      schema("'embedding' must be an object with integer 'p'");
    auto field = [&e](const char* key) -> int {
      if (!e.contains(key)) return 1;
      if (!e[key].is_number_integer()) schema(std::string("embedding '") + key + "' must be an integer");
      return e[key].get<int>();
    };
    try {
      f.embedding = LocalRing::make(e["p"].get<long>(), field("e"), field("f"));
    } catch (const Error& err) {
      schema(std::string("bad embedding: ") + err.what());
    }
  }
  if (j.contains("j_denominator_valuations")) {
    const json& jd = j["j_denominator_valuations"];
    if (!jd.is_object()) schema("'j_denominator_valuations' must be an object");
    for (auto it = jd.begin(); it != jd.end(); ++it) {
      if (!it.value().is_number_integer()) schema("j-denominator valuations must be integers");
      try {
        f.j_denominator_valuations[std::stol(it.key())] = it.value().get<int>();
      } catch (const std::exception&) {
        schema("bad prime key '" + it.key() + "'");
      }
    }
  }
  if (!j.contains("an") || !j["an"].is_array() || j["an"].empty()) schema("'an' must be a non-empty array");
  for (const json& x : j["an"]) {
    if (x.is_number_integer()) {
      f.an.emplace_back(mpz_class(std::to_string(x.get<long long>())));
    } else if (x.is_string()) {
      const std::string s = x.get<std::string>();
      if (f.embedding) {
        f.an.emplace_back(parse_digits(*f.embedding, s));
      } else {
        mpz_class n;
        if (s.empty() || n.set_str(s, 10) != 0) schema("'" + s + "' is not an integer (no embedding given)");
        f.an.emplace_back(n);
      }
    } else {
      schema("coefficients must be integers or digit strings");
    }
  }
  validate(f);
  long need = sturm_bound(f.embedding ? f.level * f.embedding->p : f.level);
  if (f.bound() < need)
    f.warnings.push_back("coefficient bound " + std::to_string(f.bound()) + " is below the Sturm bound " +
                         std::to_string(need));
  return f;
}

EigenformRecord load_form(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_form(ss.str());
}

std::string to_json(const EigenformRecord& f) {
  json j;
  j["label"] = f.label;
  j["level"] = f.level;
  j["weight"] = f.weight;
  if (!f.provenance.empty()) j["provenance"] = f.provenance;
  if (f.embedding) j["embedding"] = {{"p", f.embedding->p}, {"e", f.embedding->e}, {"f", f.embedding->f}};
  if (!f.j_denominator_valuations.empty()) {
    json jd = json::object();
    for (auto [q, v] : f.j_denominator_valuations) jd[std::to_string(q)] = v;
    j["j_denominator_valuations"] = jd;
  }
  json an = json::array();
  for (const auto& c : f.an) {
    if (c.exact() && c.integer().fits_slong_p())
      an.push_back(c.integer().get_si());
    else if (c.exact() && f.embedding)
      an.push_back(digit_string(c.at(*f.embedding, 64)));
    else
      an.push_back(c.to_string());
  }
  j["an"] = an;
  return j.dump();
}

EigenformRecord build_form(const std::string& label, long level,
                           const std::map<long, Coefficient>& prime_coefficients, long bound,
                           std::optional<LocalRing> embedding) {
  if (bound < 1) throw Error(ErrorCode::kInvalidArgument, "coefficient bound must be positive");
  EigenformRecord f;
  f.label = label;
  f.level = level;
  f.embedding = embedding;
  f.an.assign(static_cast<std::size_t>(bound), Coefficient(0L));
  f.an[0] = Coefficient(1L);
  auto spf = spf_table(bound);
  for (long n = 2; n <= bound; ++n) {
    long q = spf[static_cast<std::size_t>(n)], m = n, qk = 1;
    while (m % q == 0) {
      m /= q;
      qk *= q;
    }
    Coefficient& out = f.an[static_cast<std::size_t>(n - 1)];
    if (m > 1) {
      out = f.a(qk) * f.a(m);
    } else if (qk == q) {
      auto it = prime_coefficients.find(q);
      if (it == prime_coefficients.end())
        throw Error(ErrorCode::kMissingCoefficient, label + ": no coefficient for the prime " + std::to_string(q));
      out = it->second;
    } else if (level % q == 0) {
      out = f.a(q) * f.a(qk / q);
    } else {
      out = f.a(q) * f.a(qk / q) - Coefficient(q) * f.a(qk / q / q);
    }
  }
  return f;
}

long reference_form_limit(const std::string& label) {
  if (label == "11a") return std::end(k11aPrimeCoefficients)[-1].p;
  if (label == "19a") return std::end(k19aPrimeCoefficients)[-1].p;
  throw Error(ErrorCode::kInvalidArgument, "no bundled table for '" + label + "'");
}

EigenformRecord reference_form(const std::string& label, long bound) {
  const PrimeCoefficient* begin;
  const PrimeCoefficient* end;
  long level;
  std::string curve;
  if (label == "11a") {
    begin = std::begin(k11aPrimeCoefficients);
    end = std::end(k11aPrimeCoefficients);
    level = 11;
    curve = "[0, -1, 1, -10, -20]";
  } else if (label == "19a") {
    begin = std::begin(k19aPrimeCoefficients);
    end = std::end(k19aPrimeCoefficients);
    level = 19;
    curve = "[0, 1, 1, -9, -15]";
  } else {
    throw Error(ErrorCode::kInvalidArgument, "no bundled table for '" + label + "'");
  }
  if (bound > (end - 1)->p)
    throw Error(ErrorCode::kMissingCoefficient, "bundled table for " + label + " stops at " + std::to_string((end - 1)->p));
  std::map<long, Coefficient> primes;
  for (auto it = begin; it != end; ++it) primes.emplace(it->p, Coefficient(it->a));
  EigenformRecord f = build_form(label, level, primes, bound);
  f.provenance = "bundled a_q table, point counts on " + curve;
  return f;
}

EigenformRecord twist(const EigenformRecord& f, long D) {
  if (D == 1) return f;
  if (!is_fundamental_discriminant(D))
    throw Error(ErrorCode::kNotFundamental, std::to_string(D) + " is not a fundamental discriminant");
  if (f.embedding && D % f.embedding->p == 0)
    throw Error(ErrorCode::kNotCoprime, "p = " + std::to_string(f.embedding->p) + " divides D = " + std::to_string(D));
  EigenformRecord g = f;
  g.label = f.label + "^" + std::to_string(D);
  const long D2 = D * D;
  if (std::gcd(D, f.level) == 1) {
    g.level = f.level * D2;
  } else {
    g.level = std::lcm(f.level, D2);
    g.warnings.push_back("gcd(D, N) > 1: level set to lcm(N, D^2) = " + std::to_string(g.level) +
                         "; the twist need not be new there");
  }
  // chi is completely multiplicative, so a_n chi(n) is the multiplicative
  // extension of a_q chi(q)
  for (long n = 1; n <= f.bound(); ++n) {
    int c = quadratic_character(D, n);
    Coefficient& x = g.an[static_cast<std::size_t>(n - 1)];
    if (c == 0)
      x = Coefficient(0L);
    else if (c == -1)
      x = Coefficient(0L) - x;
  }
  g.provenance = (f.provenance.empty() ? f.label : f.provenance) + "; twisted by chi_" + std::to_string(D);
  return g;
}

EigenformRecord stabilize_fcheck(const EigenformRecord& f, long N) {
  if (N < 1 || N % f.level != 0)
    throw Error(ErrorCode::kDivisibilityViolation,
                "form level " + std::to_string(f.level) + " does not divide " + std::to_string(N));
  const long quotient = N / f.level;
  auto drop = prime_divisors(quotient);
  for (long q : drop)
    if (N % (q * q) != 0)
      throw Error(ErrorCode::kDivisibilityViolation,
                  std::to_string(q) + " divides N/N' = " + std::to_string(quotient) + " but " + std::to_string(q) +
                      "^2 does not divide N = " + std::to_string(N));
  if (drop.empty()) return f;
  EigenformRecord g = f;
  g.level = N;
  g.label = f.label + "@" + std::to_string(N);
  for (long n = 2; n <= g.bound(); ++n)
    if (divides_any(n, drop)) g.an[static_cast<std::size_t>(n - 1)] = Coefficient(0L);
  return g;
}

std::string to_string(OrdinarityTag t) {
  switch (t) {
    case OrdinarityTag::kWilesOrdinary: return "WILES_ORDINARY";
    case OrdinarityTag::kBothNonordinary: return "BOTH_NONORDINARY";
    case OrdinarityTag::kMixed: return "MIXED";
    case OrdinarityTag::kUnavailable: return "UNAVAILABLE";
  }
  return "?";
}

CongruenceVerdict check_congruence(const EigenformRecord& f1, const EigenformRecord& f2, const LocalRing& ring,
                                   int k, long N, bool exclude_level_primes) {
  for (const auto* f : {&f1, &f2})
    if (f->embedding && !(*f->embedding == ring))
      throw Error(ErrorCode::kEmbeddingMismatch,
                  f->label + " is embedded in " + to_string(*f->embedding) + ", not " + to_string(ring));
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "congruence precision must be >= 1");
  if (N < 1) throw Error(ErrorCode::kInvalidArgument, "common level must be positive");
  CongruenceVerdict v;
  v.precision = k;
  const long p = ring.p;
  v.required_bound = sturm_bound(N * p);
  v.checked_bound = std::min({f1.bound(), f2.bound(), v.required_bound});
  if (N % f1.level || N % f2.level)
    v.notes.push_back("N = " + std::to_string(N) + " is not a common multiple of the two levels");
  std::vector<long> level_primes = prime_divisors(std::lcm(N, std::lcm(f1.level, f2.level)));
  if (exclude_level_primes) v.excluded_primes = level_primes;

  for (long n = 1; n <= v.checked_bound; ++n) {
    if (exclude_level_primes && divides_any(n, level_primes)) continue;
    auto r = congruent_mod(f1.a(n), f2.a(n), ring, k);
    if (!r)
      v.undecided.push_back(n);
    else if (!*r)
      v.witnesses.push_back(n);
  }
  for (long q : level_primes) {
    if (!f1.has(q) || !f2.has(q)) continue;
    if (congruent_mod(f1.a(q), f2.a(q), ring, k) == false) v.level_mismatches.push_back(q);
  }
  if (f1.has(p) && f2.has(p) && N % p != 0) {
    auto u1 = f1.a(p).is_unit(ring), u2 = f2.a(p).is_unit(ring);
    if (u1 && u2) {
      if (*u1 && *u2)
        v.p_tag = OrdinarityTag::kWilesOrdinary;
      else if (!*u1 && !*u2)
        v.p_tag = OrdinarityTag::kBothNonordinary;
      else
        v.p_tag = OrdinarityTag::kMixed;
    }
  }
  if (v.p_tag == OrdinarityTag::kMixed)
    v.notes.push_back("one form is p-ordinary and the other is not; a_p cannot agree modulo pi");

  if (!v.witnesses.empty())
    v.holds = Verdict::kFails;
  else if (v.checked_bound < v.required_bound || !v.undecided.empty())
    v.holds = Verdict::kUnknown;
  else
    v.holds = Verdict::kHolds;
  if (v.checked_bound < v.required_bound)
    v.notes.push_back("only " + std::to_string(v.checked_bound) + " of the " + std::to_string(v.required_bound) +
                      " coefficients below the Sturm bound are available");
  v.notes.push_back(
      "coefficient congruences certify equal traces of the residual representations, hence an isomorphism "
      "only up to semisimplification");
  return v;
}

std::string to_string(EisensteinFamily fam) {
  switch (fam) {
    case EisensteinFamily::kGeneric: return "GENERIC";
    case EisensteinFamily::kN1: return "N1";
    case EisensteinFamily::kN2: return "N2";
    case EisensteinFamily::kN0: return "N0";
  }
  return "?";
}

EisensteinVerdict check_partial_eisenstein(const EigenformRecord& f, long phi, long psi, long N1, long N2, long N0,
                                           const LocalRing& ring, int k) {
  auto invalid = [](const std::string& msg) { return Error(ErrorCode::kDecompositionInvalid, msg); };
  if (N1 < 1 || N2 < 1 || N0 < 1) throw invalid("N1, N2, N0 must be positive");
  if (N1 * N2 * N0 != f.level)
    throw invalid(std::to_string(N1) + " * " + std::to_string(N2) + " * " + std::to_string(N0) +
                  " != level " + std::to_string(f.level));
  if (std::gcd(N1, N2) != 1 || std::gcd(N1, N0) != 1 || std::gcd(N2, N0) != 1)
    throw invalid("N1, N2, N0 are not pairwise coprime");
  for (auto [q, e] : factorize(N1 * N2))
    if (e > 1) throw invalid("N1 * N2 is not squarefree (" + std::to_string(q) + "^2 divides it)");
  for (long chi : {phi, psi})
    if (chi != 1 && !is_fundamental_discriminant(chi))
      throw Error(ErrorCode::kNotFundamental, std::to_string(chi) + " is not a fundamental discriminant");

  EisensteinVerdict v;
  v.bound = f.bound();
  bool undecided = false;
  auto spf = spf_table(f.bound());
  for (long l = 2; l <= f.bound(); ++l) {
    if (spf[static_cast<std::size_t>(l)] != l) continue;
    EisensteinCheck c;
    c.prime = l;
    long expected;
    if (N1 % l == 0) {
      c.family = EisensteinFamily::kN1;
      expected = quadratic_character(phi, l);
    } else if (N2 % l == 0) {
      c.family = EisensteinFamily::kN2;
      expected = l * quadratic_character(psi, l);
    } else if (N0 % l == 0) {
      c.family = EisensteinFamily::kN0;
      expected = 0;
    } else {
      expected = quadratic_character(phi, l) + l * quadratic_character(psi, l);
    }
    c.expected = std::to_string(expected);
    c.holds = congruent_mod(f.a(l), Coefficient(expected), ring, k);
    if (!c.holds)
      undecided = true;
    else if (!*c.holds)
      v.witnesses.push_back(l);
    v.checks.push_back(std::move(c));
  }
  v.holds = !v.witnesses.empty() ? Verdict::kFails : (undecided ? Verdict::kUnknown : Verdict::kHolds);
  return v;
}

}  // namespace iwasawa
