#include "iwasawa/padic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "iwasawa/error.hpp"

namespace iwasawa {

namespace {

using Vec = std::vector<mpz_class>;

mpz_class pow_p(long p, long k) {
  mpz_class r;
  if (k <= 0) return 1;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return r;
}

long ceil_div(long a, long b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

// Component index -> power of pi it multiplies.
int pi_power(const LocalRing& R, std::size_t idx) { return static_cast<int>(idx) / R.f; }

// Reduce an integral vector modulo pi^r.
void reduce(const LocalRing& R, Vec& c, int r) {
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    long k = ceil_div(r - pi_power(R, idx), R.e);
    if (k <= 0) {
      c[idx] = 0;
    } else {
      mpz_class m = pow_p(R.p, k);
      mpz_fdiv_r(c[idx].get_mpz_t(), c[idx].get_mpz_t(), m.get_mpz_t());
    }
  }
}

bool all_zero(const Vec& c) {
  return std::all_of(c.begin(), c.end(), [](const mpz_class& x) { return x == 0; });
}

// pi-adic valuation of a nonzero integral vector.
int vec_valuation(const LocalRing& R, const Vec& c) {
  int best = -1;
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    if (c[idx] == 0) continue;
    int v = R.e * padic_valuation(c[idx], R.p) + pi_power(R, idx);
    if (best < 0 || v < best) best = v;
  }
  return best;
}

Vec times_pi(const LocalRing& R, Vec c, int k) {
  if (k <= 0) return c;
  mpz_class pk = pow_p(R.p, k / R.e);
  for (auto& x : c) x *= pk;
  if (R.e == 2 && (k % 2) == 1) {
    // (A + B pi) pi = pB + A pi
    Vec out(c.size());
    for (int i = 0; i < R.f; ++i) {
      out[i] = R.p * c[R.f + i];
      out[R.f + i] = c[i];
    }
    return out;
  }
  return c;
}

// Exact division by pi^k; the caller guarantees divisibility.
Vec div_pi(const LocalRing& R, Vec c, int k) {
  if (k <= 0) return c;
  mpz_class pk = pow_p(R.p, k / R.e);
  for (auto& x : c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), pk.get_mpz_t());
  if (R.e == 2 && (k % 2) == 1) {
    // (A + B pi) / pi = B + (A/p) pi
    Vec out(c.size());
    for (int i = 0; i < R.f; ++i) {
      out[i] = c[R.f + i];
      mpz_divexact_ui(out[R.f + i].get_mpz_t(), c[i].get_mpz_t(), static_cast<unsigned long>(R.p));
    }
    return out;
  }
  return c;
}

// Multiplication in W = Z_p[t]/(t^2 - r) on slices of length f.
void mul_w(const LocalRing& R, const mpz_class* a, const mpz_class* b, mpz_class* out) {
  if (R.f == 1) {
    out[0] = a[0] * b[0];
    return;
  }
  mpz_class c0 = a[0] * b[0] + R.nonresidue * a[1] * b[1];
  mpz_class c1 = a[0] * b[1] + a[1] * b[0];
  out[0] = std::move(c0);
  out[1] = std::move(c1);
}

Vec vec_mul(const LocalRing& R, const Vec& a, const Vec& b) {
  Vec out(a.size());
  if (R.e == 1) {
    mul_w(R, a.data(), b.data(), out.data());
    return out;
  }
  const int f = R.f;
  Vec t1(f), t2(f);
  // (A1 + B1 pi)(A2 + B2 pi) = (A1A2 + p B1B2) + (A1B2 + A2B1) pi
  mul_w(R, a.data(), b.data(), t1.data());
  mul_w(R, a.data() + f, b.data() + f, t2.data());
  for (int i = 0; i < f; ++i) out[i] = t1[i] + R.p * t2[i];
  mul_w(R, a.data(), b.data() + f, t1.data());
  mul_w(R, a.data() + f, b.data(), t2.data());
  for (int i = 0; i < f; ++i) out[f + i] = t1[i] + t2[i];
  return out;
}

// Inverse of a unit of W modulo p^k.
void inv_w(const LocalRing& R, const mpz_class* a, mpz_class* out, const mpz_class& mod) {
  if (R.f == 1) {
    if (mpz_invert(out[0].get_mpz_t(), a[0].get_mpz_t(), mod.get_mpz_t()) == 0)
      throw Error(ErrorCode::kNonUnit, "residue not invertible");
    return;
  }
  mpz_class norm = a[0] * a[0] - R.nonresidue * a[1] * a[1];
  mpz_class ninv;
  if (mpz_invert(ninv.get_mpz_t(), norm.get_mpz_t(), mod.get_mpz_t()) == 0)
    throw Error(ErrorCode::kNonUnit, "residue not invertible");
  out[0] = a[0] * ninv;
  out[1] = -a[1] * ninv;
}

Vec vec_unit_inverse(const LocalRing& R, const Vec& u, int r) {
  mpz_class mod = pow_p(R.p, ceil_div(r, R.e) + 1);
  Vec out(u.size());
  if (R.e == 1) {
    inv_w(R, u.data(), out.data(), mod);
    reduce(R, out, r);
    return out;
  }
  const int f = R.f;
  // (A + B pi)^-1 = (A - B pi) / (A^2 - p B^2)
  Vec a2(f), b2(f), n(f), ninv(f);
  mul_w(R, u.data(), u.data(), a2.data());
  mul_w(R, u.data() + f, u.data() + f, b2.data());
  for (int i = 0; i < f; ++i) n[i] = a2[i] - R.p * b2[i];
  inv_w(R, n.data(), ninv.data(), mod);
  Vec conj(u.size()), nv(u.size());
  for (int i = 0; i < f; ++i) {
    conj[i] = u[i];
    conj[f + i] = -u[f + i];
    nv[i] = ninv[i];
  }
  out = vec_mul(R, conj, nv);
  reduce(R, out, r);
  return out;
}

}  // namespace

int padic_valuation(const mpz_class& n, long p) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "valuation of zero integer");
  mpz_class m = n;
  mpz_class pp = p;
  return static_cast<int>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), pp.get_mpz_t()));
}

bool is_prime(long n) {
  if (n < 2) return false;
  mpz_class z = n;
  return mpz_probab_prime_p(z.get_mpz_t(), 30) > 0;
}

std::optional<long> sqrt_mod_prime(long a, long p) {
  mpz_class P = p;
  mpz_class A = a;
  A %= P;
  if (A < 0) A += P;
  if (A == 0) return 0L;
  if (mpz_legendre(A.get_mpz_t(), P.get_mpz_t()) != 1) return std::nullopt;
  // Tonelli-Shanks
  mpz_class q = p - 1;
  unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
  q >>= s;
  mpz_class z = 2;
  while (mpz_legendre(z.get_mpz_t(), P.get_mpz_t()) != -1) ++z;
  mpz_class c, x, t, b;
  mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), P.get_mpz_t());
  mpz_class e1 = (q + 1) / 2;
  mpz_powm(x.get_mpz_t(), A.get_mpz_t(), e1.get_mpz_t(), P.get_mpz_t());
  mpz_powm(t.get_mpz_t(), A.get_mpz_t(), q.get_mpz_t(), P.get_mpz_t());
  unsigned long m = s;
  while (t != 1) {
    unsigned long i = 0;
    mpz_class tt = t;
    while (tt != 1) {
      tt = tt * tt % P;
      ++i;
    }
    b = c;
    for (unsigned long j = 0; j + i + 1 < m; ++j) b = b * b % P;
    x = x * b % P;
    c = b * b % P;
    t = t * c % P;
    m = i;
  }
  return x.get_si();
}

LocalRing LocalRing::make(long p, int e, int f) {
  if (p < 3 || !is_prime(p)) throw Error(ErrorCode::kInvalidArgument, "p must be an odd prime");
  if (e < 1 || e > 2 || f < 1 || f > 2)
    throw Error(ErrorCode::kUnsupported, "only e, f in {1, 2} are supported");
  LocalRing R;
  R.p = p;
  R.e = e;
  R.f = f;
  if (f == 2) {
    long n = 2;
    while (sqrt_mod_prime(n, p)) ++n;
    R.nonresidue = n;
  }
  return R;
}

mpz_class LocalRing::residue_field_size() const { return pow_p(p, f); }

std::string to_string(const LocalRing& ring) {
  std::ostringstream os;
  os << "O(p=" << ring.p << ",e=" << ring.e << ",f=" << ring.f << ")";
  return os.str();
}

std::string to_string(const Valuation& v) {
  return v.exact ? std::to_string(v.value) : "AT_LEAST(" + std::to_string(v.value) + ")";
}

PadicNumber::PadicNumber(const LocalRing& ring, int shift, std::vector<mpz_class> digits,
                         int precision)
    : ring_(ring), zero_(true), shift_(0), precision_(precision) {
  int rel = precision - shift;
  if (rel <= 0) return;
  reduce(ring_, digits, rel);
  if (all_zero(digits)) return;
  int w = vec_valuation(ring_, digits);
  if (w >= rel) return;
  digits = div_pi(ring_, std::move(digits), w);
  shift_ = shift + w;
  reduce(ring_, digits, precision - shift_);
  unit_ = std::move(digits);
  zero_ = false;
}

PadicNumber PadicNumber::zero(const LocalRing& ring, int precision) {
  return PadicNumber(ring, 0, Vec(ring.rank()), precision);
}

PadicNumber PadicNumber::from_integer(const LocalRing& ring, const mpz_class& n, int precision) {
  return from_rational(ring, mpq_class(n), precision);
}

PadicNumber PadicNumber::from_rational(const LocalRing& ring, const mpq_class& q, int precision) {
  if (q == 0) return zero(ring, precision);
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  int a = padic_valuation(num, ring.p);
  int b = padic_valuation(den, ring.p);
  num /= pow_p(ring.p, a);
  den /= pow_p(ring.p, b);
  int shift = ring.e * (a - b);
  int rel = precision - shift;
  if (rel <= 0) return zero(ring, precision);
  mpz_class mod = pow_p(ring.p, ceil_div(rel, ring.e));
  mpz_class dinv;
  mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  Vec c(ring.rank());
  c[0] = num * dinv;
  return PadicNumber(ring, shift, std::move(c), precision);
}

PadicNumber PadicNumber::from_components(const LocalRing& ring, std::vector<mpz_class> components,
                                         int precision) {
  if (static_cast<int>(components.size()) != ring.rank())
    throw Error(ErrorCode::kStructureMismatch, "component count does not match e*f");
  return PadicNumber(ring, 0, std::move(components), precision);
}

PadicNumber PadicNumber::uniformizer(const LocalRing& ring, int precision) {
  Vec c(ring.rank());
  if (ring.e == 1)
    c[0] = ring.p;
  else
    c[ring.f] = 1;
  return PadicNumber(ring, 0, std::move(c), precision);
}

PadicNumber PadicNumber::parse(const LocalRing& ring, const std::string& text, int precision) {
  auto bad = [&text]() { return Error(ErrorCode::kSchemaError, "cannot parse p-adic value '" + text + "'"); };
  std::string body = text;
  mpq_class scale = 1;
  std::size_t slash = text.rfind('/');
  if (slash != std::string::npos) {
    body = text.substr(0, slash);
    mpz_class den;
    if (den.set_str(text.substr(slash + 1), 10) != 0 || den <= 0) throw bad();
    scale = mpq_class(1, 1) / mpq_class(den);
  }
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') throw bad();
    std::vector<mpz_class> comps;
    std::string inner = body.substr(1, body.size() - 2);
    std::size_t pos = 0;
    while (pos <= inner.size()) {
      std::size_t comma = inner.find(',', pos);
      std::string item = inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      mpz_class c;
      if (c.set_str(item, 10) != 0) throw bad();
      comps.push_back(c);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (static_cast<int>(comps.size()) != ring.rank()) throw bad();
    int extra = scale == 1 ? 0 : ring.e * padic_valuation(scale.get_den(), ring.p);
    PadicNumber x = from_components(ring, std::move(comps), precision + extra);
    if (scale == 1) return x;
    return (x * from_rational(ring, scale, precision + 2 * extra + 1)).with_precision(precision);
  }
  mpz_class n;
  if (n.set_str(body, 10) != 0) throw bad();
  return from_rational(ring, mpq_class(n) * scale, precision);
}

Valuation PadicNumber::valuation() const {
  if (zero_) return Valuation::at_least(precision_);
  return {shift_, true};
}

std::vector<mpz_class> PadicNumber::components() const {
  if (zero_) return Vec(ring_.rank());
  if (shift_ < 0) throw Error(ErrorCode::kInvalidArgument, "value is not integral");
  Vec c = times_pi(ring_, unit_, shift_);
  reduce(ring_, c, precision_);
  return c;
}

bool PadicNumber::in_base_ring() const {
  if (zero_) return true;
  Vec v = unit_;
  if (ring_.e == 2 && (shift_ % 2 != 0)) {
    v = times_pi(ring_, v, 1);
    reduce(ring_, v, precision_ - shift_ + 1);
  }
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] != 0) return false;
  return true;
}

mpz_class PadicNumber::integer_representative() const {
  if (!in_base_ring()) throw Error(ErrorCode::kInvalidArgument, "value is not in Z_p");
  if (zero_) return 0;
  return components()[0];
}

std::vector<long> PadicNumber::residue() const {
  if (!is_integral()) throw Error(ErrorCode::kInvalidArgument, "residue of a non-integral value");
  std::vector<long> r(ring_.f, 0);
  if (zero_ || shift_ > 0) return r;
  for (int i = 0; i < ring_.f; ++i) {
    mpz_class x;
    mpz_fdiv_r_ui(x.get_mpz_t(), unit_[i].get_mpz_t(), static_cast<unsigned long>(ring_.p));
    r[i] = x.get_si();
  }
  return r;
}

PadicNumber PadicNumber::with_precision(int precision) const {
  int n = std::min(precision, precision_);
  if (zero_) return zero(ring_, n);
  return PadicNumber(ring_, shift_, unit_, n);
}

PadicNumber PadicNumber::inverse() const {
  if (zero_) throw Error(ErrorCode::kDivisionByZero, "inverse of a value indistinguishable from 0");
  int rel = precision_ - shift_;
  return PadicNumber(ring_, -shift_, vec_unit_inverse(ring_, unit_, rel), rel - shift_);
}

PadicNumber PadicNumber::pow(const mpz_class& exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  if (exponent == 0) {
    int n = zero_ ? precision_ : precision_ - shift_;
    return from_integer(ring_, 1, std::max(n, 1));
  }
  PadicNumber result;
  bool have = false;
  PadicNumber base = *this;
  mpz_class k = exponent;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) {
      result = have ? result * base : base;
      have = true;
    }
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

std::string PadicNumber::to_string() const {
  if (zero_) return "0";
  if (ring_.rank() == 1) {
    if (shift_ >= 0) return components()[0].get_str();
    mpz_class den = pow_p(ring_.p, -shift_);
    return unit_[0].get_str() + "/" + den.get_str();
  }
  Vec c;
  std::string suffix;
  if (shift_ >= 0) {
    c = components();
  } else {
    // scale by p^k to clear the denominator
    int k = static_cast<int>(ceil_div(-shift_, ring_.e));
    c = times_pi(ring_, unit_, shift_ + ring_.e * k);
    reduce(ring_, c, precision_ + ring_.e * k);
    suffix = "/" + pow_p(ring_.p, k).get_str();
  }
  std::string s = "[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += c[i].get_str();
  }
  return s + "]" + suffix;
}

namespace {
void require_same(const PadicNumber& a, const PadicNumber& b) {
  if (!(a.ring() == b.ring()))
    throw Error(ErrorCode::kStructureMismatch,
                "operands live in " + to_string(a.ring()) + " and " + to_string(b.ring()));
}
}  // namespace

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
  require_same(a, b);
  int n = std::min(a.precision_, b.precision_);
  if (a.zero_) return b.with_precision(n);
  if (b.zero_) return a.with_precision(n);
  int s = std::min(a.shift_, b.shift_);
  if (s >= n) return PadicNumber::zero(a.ring_, n);
  Vec x = times_pi(a.ring_, a.unit_, a.shift_ - s);
  Vec y = times_pi(a.ring_, b.unit_, b.shift_ - s);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  return PadicNumber(a.ring_, s, std::move(x), n);
}

PadicNumber operator-(const PadicNumber& a) {
  if (a.zero_) return a;
  Vec x = a.unit_;
  for (auto& c : x) c = -c;
  return PadicNumber(a.ring_, a.shift_, std::move(x), a.precision_);
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
  require_same(a, b);
  if (a.zero_ && b.zero_) return PadicNumber::zero(a.ring_, a.precision_ + b.precision_);
  if (a.zero_) return PadicNumber::zero(a.ring_, a.precision_ + b.shift_);
  if (b.zero_) return PadicNumber::zero(a.ring_, b.precision_ + a.shift_);
  int rel = std::min(a.precision_ - a.shift_, b.precision_ - b.shift_);
  int s = a.shift_ + b.shift_;
  return PadicNumber(a.ring_, s, vec_mul(a.ring_, a.unit_, b.unit_), s + rel);
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) { return a * b.inverse(); }

std::optional<bool> congruent(const PadicNumber& a, const PadicNumber& b, int k) {
  PadicNumber d = a - b;
  Valuation v = d.valuation();
  if (v.exact) return v.value >= k;
  if (v.value >= k) return true;
  return std::nullopt;
}

namespace {

long mulmod(long a, long b, long p) {
  __int128 r = static_cast<__int128>(a) * b % p;
  return static_cast<long>(r < 0 ? r + p : r);
}

long invmod(long a, long p) {
  mpz_class r, A = a, P = p;
  mpz_invert(r.get_mpz_t(), A.get_mpz_t(), P.get_mpz_t());
  return r.get_si();
}

// Square root of a nonzero residue class in F_{p^f}, as components in [0, p).
std::optional<std::vector<long>> residue_sqrt(const LocalRing& R, const std::vector<long>& c) {
  const long p = R.p;
  if (R.f == 1) {
    auto s = sqrt_mod_prime(c[0], p);
    if (!s) return std::nullopt;
    return std::vector<long>{*s};
  }
  const long r = R.nonresidue % p;
  // N(x) = c0^2 - r c1^2 = N(y)^2, and y0^2 = (c0 +- N(y)) / 2.
  long norm = (mulmod(c[0], c[0], p) - mulmod(r, mulmod(c[1], c[1], p), p) + p) % p;
  auto n = sqrt_mod_prime(norm, p);
  if (!n) return std::nullopt;
  const long inv2 = (p + 1) / 2;
  for (long sign : {1L, -1L}) {
    long y0sq = mulmod((c[0] + sign * *n + p) % p, inv2, p);
    auto y0 = sqrt_mod_prime(y0sq, p);
    if (!y0) continue;
    long y1;
    if (*y0 == 0) {
      if (c[1] != 0) continue;
      auto s = sqrt_mod_prime(mulmod(c[0], invmod(r, p), p), p);
      if (!s) continue;
      y1 = *s;
    } else {
      y1 = mulmod(c[1], invmod(2 * *y0 % p, p), p);
    }
    long a0 = (mulmod(*y0, *y0, p) + mulmod(r, mulmod(y1, y1, p), p)) % p;
    long a1 = mulmod(2 * *y0 % p, y1, p);
    if (a0 == c[0] && a1 == c[1]) return std::vector<long>{*y0, y1};
  }
  return std::nullopt;
}

bool same_value(const PadicNumber& a, const PadicNumber& b) {
  return a.precision() == b.precision() && a.components() == b.components();
}

}  // namespace

PadicNumber hensel_sqrt(const PadicNumber& a) {
  if (a.is_zero() || a.valuation().value > 0)
    throw Error(ErrorCode::kZeroInput, "square root needs a unit, got valuation " +
                                           to_string(a.valuation()));
  if (!a.is_integral()) throw Error(ErrorCode::kInvalidArgument, "square root of a non-integral value");
  const LocalRing& R = a.ring();
  auto root = residue_sqrt(R, a.residue());
  if (!root) throw Error(ErrorCode::kNotAResidue, "residue of " + a.to_string() + " is not a square");
  std::vector<long>& y = *root;
  const long half = (R.p - 1) / 2;
  bool negate = (R.f == 2 && y[1] != 0) ? y[1] > half : y[0] > half;
  Vec start(R.rank());
  for (int i = 0; i < R.f; ++i) start[i] = negate ? (y[i] == 0 ? 0 : R.p - y[i]) : y[i];
  const int M = a.precision();
  PadicNumber s = PadicNumber::from_components(R, start, M);
  PadicNumber half_unit = PadicNumber::from_rational(R, mpq_class(1, 2), M);
  for (int iter = 0; iter < 2 * M + 8; ++iter) {
    PadicNumber next = (s + a / s) * half_unit;
    if (same_value(next, s)) break;
    s = next;
  }
  return s;
}

PadicNumber padic_log(const PadicNumber& u) {
  if (u.is_zero() || !u.is_unit())
    throw Error(ErrorCode::kNotPrincipal, "log needs a principal unit");
  const LocalRing& R = u.ring();
  std::vector<long> res = u.residue();
  bool principal = res[0] == 1;
  for (std::size_t i = 1; i < res.size(); ++i) principal = principal && res[i] == 0;
  if (!principal) throw Error(ErrorCode::kNotPrincipal, u.to_string() + " is not 1 mod pi");
  const int M = u.precision();
  PadicNumber x = u - PadicNumber::from_integer(R, 1, M);
  if (x.is_zero()) return PadicNumber::zero(R, M);
  const int w = x.valuation().value;
  PadicNumber sum = PadicNumber::zero(R, M);
  PadicNumber power = x;
  const double lp = std::log(static_cast<double>(R.p));
  for (long k = 1;; ++k) {
    // Divide by k exactly: a valuation shift for the p-part, a unit inverse otherwise.
    int vk = R.e * padic_valuation(mpz_class(k), R.p);
    PadicNumber kk = PadicNumber::from_integer(R, k, power.precision() + vk + 1);
    PadicNumber term = power / kk;
    sum = (k % 2 == 1) ? sum + term : sum - term;
    // Remaining terms have valuation >= j*w - e*log_p(j) for j > k, increasing in j >= 2.
    double next = static_cast<double>(k + 1);
    if (next * w - R.e * std::log(next) / lp >= M + 1e-9) break;
    power = power * x;
  }
  return sum.with_precision(M);
}

PadicNumber teichmuller_part(const PadicNumber& u) {
  if (u.is_zero() || !u.is_unit())
    throw Error(ErrorCode::kNonUnit, "Teichmuller part needs a unit, got valuation " +
                                         to_string(u.valuation()));
  const mpz_class q = u.ring().residue_field_size();
  PadicNumber y = u;
  for (int iter = 0; iter < u.precision() + 8; ++iter) {
    PadicNumber next = y.pow(q);
    if (same_value(next, y)) break;
    y = next;
  }
  return y;
}

}  // namespace iwasawa
