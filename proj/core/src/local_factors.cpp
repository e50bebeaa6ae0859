#include "iwasawa/local_factors.hpp"

#include <algorithm>

#include "iwasawa/error.hpp"

namespace iwasawa {

namespace {

int floor_log(long p, long n) {
  int k = 0;
  for (long x = p; x <= n; x *= p) ++k;
  return k;
}

long ipow(long p, int k) {
  long r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

// u in Z_p carried into O_v (precision scales by e).
PadicNumber embed(const PadicNumber& u, const LocalRing& R) {
  if (u.ring() == R) return u;
  if (u.ring().p != R.p || !u.in_base_ring())
    throw Error(ErrorCode::kEmbeddingMismatch, "cannot carry " + u.to_string() + " into " + to_string(R));
  return PadicNumber::from_integer(R, u.integer_representative(), u.precision() * R.e);
}

MuLambda safe_invariants(const IwasawaElement& F, std::vector<std::string>& flags) {
  try {
    return mu_lambda(F);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kAllZero) throw;
    flags.push_back("ALL_ZERO: every coefficient vanishes at the working precision");
    return MuLambda{};
  }
}

}  // namespace

std::string to_string(ReductionClass c) {
  switch (c) {
    case ReductionClass::kGood: return "GOOD";
    case ReductionClass::kMultiplicative: return "MULTIPLICATIVE";
    case ReductionClass::kAdditive: return "ADDITIVE";
  }
  return "?";
}

EulerPolynomial euler_poly(const EigenformRecord& f, long q, const QuadFieldContext& ctx) {
  if (q == ctx.p) throw Error(ErrorCode::kPIsLevel, "q = p = " + std::to_string(q) + " has no Euler term here");
  if (!is_prime(q)) throw Error(ErrorCode::kInvalidArgument, std::to_string(q) + " is not prime");
  int k = 0;
  for (long N = f.level; N % q == 0; N /= q) ++k;
  EulerPolynomial P;
  P.prime = q;
  if (k == 0) {
    P.cls = ReductionClass::kGood;
    P.coeffs = {Coefficient(1L), Coefficient(0L) - f.a(q), Coefficient(q)};
  } else if (k == 1) {
    P.cls = ReductionClass::kMultiplicative;
    P.coeffs = {Coefficient(1L), Coefficient(0L) - f.a(q)};
    const Coefficient& a = f.a(q);
    if (a.exact() && a.integer() != 1 && a.integer() != -1)
      P.warnings.push_back("a_" + std::to_string(q) + " = " + a.to_string() + " at a multiplicative prime, expected +-1");
  } else {
    P.cls = ReductionClass::kAdditive;
    P.coeffs = {Coefficient(1L)};
  }
  return P;
}

FrobeniusExponent conjugate(const FrobeniusExponent& u) {
  FrobeniusExponent v = u;
  v.u = -u.u;
  v.y = -u.y;
  v.sign_convention = u.sign_convention + " (conjugate: u -> -u)";
  return v;
}

namespace {

struct Form {
  mpz_class a, b, c;  // the ideal [a, (-b + sqrt d)/2]
};

// x + y sqrt(d)
struct QuadElt {
  mpq_class x, y;
};

QuadElt mul(const QuadElt& s, const QuadElt& t, long d) {
  return {s.x * t.x + d * s.y * t.y, s.x * t.y + s.y * t.x};
}

Form make_form(const mpz_class& a, const mpz_class& b, long d) { return {a, b, (b * b - d) / (4 * a)}; }

// Composition of primitive forms; the ideal product is e times the result.
Form compose(Form f, Form g, long d, mpz_class& e) {
  if (f.a > g.a) std::swap(f, g);
  mpz_class s = (f.b + g.b) / 2, n = g.b - s, y1, dd, u, v;
  if (g.a % f.a == 0) {
    y1 = 0;
    dd = f.a;
  } else {
    mpz_gcdext(dd.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), g.a.get_mpz_t(), f.a.get_mpz_t());
    y1 = u;
  }
  mpz_class x2, y2, d1;
  if (s % dd == 0) {
    y2 = -1;
    x2 = 0;
    d1 = dd;
  } else {
    mpz_gcdext(d1.get_mpz_t(), x2.get_mpz_t(), y2.get_mpz_t(), s.get_mpz_t(), dd.get_mpz_t());
    y2 = -y2;
  }
  mpz_class v1 = f.a / d1, v2 = g.a / d1, r = y1 * y2 * n - x2 * g.c;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), v1.get_mpz_t());
  e = d1;
  return make_form(v1 * v2, g.b + 2 * v2 * r, d);
}

// Reduce f, multiplying lambda by theta / c at each swap so that
// lambda * [old ideal] stays equal to lambda' * [new ideal].
void reduce(Form& f, QuadElt& lambda, long d) {
  while (true) {
    mpz_class two_a = 2 * f.a, k = f.a - f.b;
    mpz_fdiv_q(k.get_mpz_t(), k.get_mpz_t(), two_a.get_mpz_t());
    f = make_form(f.a, f.b + k * two_a, d);
    if (f.a < f.c || (f.a == f.c && f.b >= 0)) return;
    QuadElt theta{mpq_class(-f.b, 2), mpq_class(1, 2)};
    theta.x.canonicalize();
    theta.y.canonicalize();
    lambda = mul(lambda, theta, d);
    lambda.x /= f.c;
    lambda.y /= f.c;
    f = make_form(f.c, -f.b, d);
  }
}

// least b >= 0 with b = d mod 2 and b^2 = d mod 4q
mpz_class prime_ideal_b(long q, long d) {
  for (long b = 0; b < 2 * q; ++b)
    if ((b * b - d) % (4 * q) == 0) return b;
  throw Error(ErrorCode::kInvalidArgument, std::to_string(q) + " does not split");
}

// alpha = (x + y sqrt d)/2 lies in l = [q, (b + sqrt d)/2] and has norm q^h
// without being divisible by q, so (alpha) = l^h.
bool generates(const mpz_class& x, const mpz_class& y, long q, long d, long h) {
  mpz_class qh, b = prime_ideal_b(q, d);
  mpz_ui_pow_ui(qh.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(h));
  if (x * x - d * y * y != 4 * qh) return false;
  if ((x - y * b) % (2 * q) != 0) return false;
  if (x % q == 0 && y % q == 0 && ((x / q - y / q * d) % 2 == 0)) return false;
  return true;
}

}  // namespace

std::pair<mpz_class, mpz_class> generator_by_composition(long q, const QuadFieldContext& ctx) {
  const long d = ctx.disc;
  if (!is_prime(q) || ctx.splitting(q) != 1) throw Error(ErrorCode::kInvalidArgument, std::to_string(q) + " is not split");
  // l = [q, (b + sqrt d)/2] is the form (q, -b, .)
  const Form ell = make_form(q, -prime_ideal_b(q, d), d);
  Form I = make_form(1, d & 1 ? 1 : 0, d);
  QuadElt lambda{1, 0};
  for (long k = 0; k < ctx.h; ++k) {
    mpz_class e;
    I = compose(I, ell, d, e);
    lambda.x *= e;
    lambda.y *= e;
    reduce(I, lambda, d);
  }
  if (I.a != 1) throw Error(ErrorCode::kInvariantViolation, "l^h is not principal; class number mismatch");
  mpq_class x2 = 2 * lambda.x, y2 = 2 * lambda.y;
  if (x2.get_den() != 1 || y2.get_den() != 1)
    throw Error(ErrorCode::kInvariantViolation, "composed generator is not integral");
  mpz_class x = x2.get_num(), y = y2.get_num();
  if (y < 0) {
    x = -x;
    y = -y;
  }
  if (!generates(x, y, q, d, ctx.h)) throw Error(ErrorCode::kInvariantViolation, "composed generator fails the norm check");
  return {x, y};
}

std::pair<mpz_class, mpz_class> generator_by_search(long q, const QuadFieldContext& ctx, long cap) {
  const long d = ctx.disc;
  if (!is_prime(q) || ctx.splitting(q) != 1) throw Error(ErrorCode::kInvalidArgument, std::to_string(q) + " is not split");
  // alpha = (x + y sqrt d)/2 with x^2 - d y^2 = 4 q^h, not divisible by q
  mpz_class qh, target, ymax, t, x;
  mpz_ui_pow_ui(qh.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(ctx.h));
  target = 4 * qh;
  mpz_class ad = -d;
  mpz_class ratio = target / ad;
  mpz_sqrt(ymax.get_mpz_t(), ratio.get_mpz_t());
  ymax += 1;
  if (ymax > cap)
    throw Error(ErrorCode::kSearchExhausted, "norm search for " + std::to_string(q) + "^" + std::to_string(ctx.h) +
                                                 " needs |y| <= " + ymax.get_str() + ", over the cap");
  for (mpz_class y = 1; y <= ymax; ++y) {
    t = target - ad * y * y;
    if (t < 0) break;
    if (!mpz_perfect_square_p(t.get_mpz_t())) continue;
    mpz_sqrt(x.get_mpz_t(), t.get_mpz_t());
    // x or -x: one of alpha, -alpha-bar lies in l
    for (const mpz_class& xs : {mpz_class(x), mpz_class(-x)})
      if (generates(xs, y, q, d, ctx.h)) return {xs, y};
  }
  throw Error(ErrorCode::kSearchExhausted, "no alpha of norm " + std::to_string(q) + "^" + std::to_string(ctx.h) +
                                               " with |y| <= " + ymax.get_str());
}

FrobeniusExponent frobenius_exponent(long q, const QuadFieldContext& ctx, int M) {
  const long d = ctx.disc, p = ctx.p;
  if (M < 1) throw Error(ErrorCode::kInvalidArgument, "precision must be positive");
  if (!is_prime(q) || q == p || ctx.splitting(q) != 1)
    throw Error(ErrorCode::kInvalidArgument,
                std::to_string(q) + " is not a prime split in Q(sqrt(" + std::to_string(d) + ")) other than p");
  std::pair<mpz_class, mpz_class> found;
  std::string method;
  try {
    found = generator_by_search(q, ctx, kNormSearchCap);
    method = "norm search";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSearchExhausted) throw;
    found = generator_by_composition(q, ctx);
    method = "ideal composition";
  }
  FrobeniusExponent out;
  out.prime = q;
  out.x = found.first;
  out.y = found.second;
  out.sign_convention = "(alpha) = l^h for l = (q, (b + sqrt(d))/2) with the least b >= 0, y > 0 (" + method +
                        "); sqrt(d) is the context's split root";

  for (int W = M + 3; W <= 4 * M + 24; W += M + 3) {
    const LocalRing& R = ctx.ring;
    PadicNumber s = hensel_sqrt(PadicNumber::from_integer(R, d, W));
    PadicNumber X = PadicNumber::from_integer(R, out.x, W), Y = PadicNumber::from_integer(R, out.y, W);
    PadicNumber beta = (X + Y * s) / (X - Y * s);
    PadicNumber principal = beta / teichmuller_part(beta);
    PadicNumber L = padic_log(principal);
    if (L.is_zero()) continue;
    PadicNumber lambda0 = padic_log(PadicNumber::from_integer(R, 1 + p, W));
    PadicNumber u = L / (PadicNumber::from_integer(R, ctx.h, W) * lambda0);
    if (u.precision() < M) continue;
    out.u = u.with_precision(M);
    if (out.u.is_zero()) continue;
    out.vp_u = out.u.valuation().value;
    return out;
  }
  throw Error(ErrorCode::kPrecisionExhausted, "log of the Frobenius at " + std::to_string(q) +
                                                  " is indistinguishable from 0 at precision " + std::to_string(M));
}

int local_term_degree(const EulerPolynomial& P, const FrobeniusExponent& u, long p) {
  long bound = ipow(p, u.vp_u) * std::max(P.degree(), 0) + 8;
  return static_cast<int>(std::max(64L, bound));
}

LocalTerm local_term(const EulerPolynomial& P, const FrobeniusExponent& u, int D, int M, const LocalRing& ring) {
  if (D < 0 || M < 1) throw Error(ErrorCode::kInvalidArgument, "bad degree or precision");
  LocalTerm out;
  out.prime = P.prime;
  out.cls = P.cls;
  out.vp_u = u.vp_u;
  if (u.u.is_zero())
    out.flags.push_back("u = 0: the prime is not finitely decomposed in the anticyclotomic tower");
  const long q = P.prime;
  const PadicNumber uv = embed(u.u, ring);
  const PadicNumber qinv = PadicNumber::from_rational(ring, mpq_class(1, q), M);
  IwasawaElement sum = P.coeffs[0].at(ring, M) * IwasawaElement::one(ring, D, M);
  PadicNumber scale = PadicNumber::from_integer(ring, 1, M);
  for (int i = 1; i <= P.degree(); ++i) {
    scale = scale * qinv;
    PadicNumber c = P.coeffs[static_cast<std::size_t>(i)].at(ring, M);
    if (c.is_zero() && P.coeffs[static_cast<std::size_t>(i)].is_exact_zero()) continue;
    PadicNumber iu = PadicNumber::from_integer(ring, i, uv.precision()) * uv;
    sum = sum + (c * scale) * binomial_series(iu, D, M);
  }
  out.series = sum;
  out.invariants = safe_invariants(sum, out.flags);
  if (out.invariants.certain() && *out.invariants.mu != 0)
    out.flags.push_back("MU_NONZERO: certain local term with mu = " + std::to_string(*out.invariants.mu));
  if (!out.invariants.certain()) out.flags.push_back("PRECISION_LIMITED: raise D or M");
  return out;
}

LocalTerm inert_local_term(const EulerPolynomial& P, int D, int M, const LocalRing& ring) {
  LocalTerm out;
  out.prime = P.prime;
  out.split = false;
  out.cls = P.cls;
  const long q = P.prime;
  // Frob_l = Frob_q^2 on V^I: eigenvalues squared.
  PadicNumber inv_q2 = PadicNumber::from_rational(ring, mpq_class(1, q * q), M);
  PadicNumber value;
  if (P.cls == ReductionClass::kGood) {
    Coefficient a = Coefficient(0L) - P.coeffs[1];
    Coefficient trace = a * a - Coefficient(2 * q);
    value = PadicNumber::from_integer(ring, 1, M) - trace.at(ring, M) * inv_q2 + inv_q2;
  } else if (P.cls == ReductionClass::kMultiplicative) {
    Coefficient a = Coefficient(0L) - P.coeffs[1];
    value = PadicNumber::from_integer(ring, 1, M) - (a * a).at(ring, M) * inv_q2;
  } else {
    value = PadicNumber::from_integer(ring, 1, M);
  }
  out.series = IwasawaElement::constant(value, D);
  out.invariants = safe_invariants(out.series, out.flags);
  out.flags.push_back("INERT: gamma_l = 1, constant term, lambda = 0");
  if (out.invariants.certain() && *out.invariants.mu > 0)
    out.flags.push_back("NON_UNIT_CONSTANT: enters through the unit condition, not lambda");
  return out;
}

LocalSum sum_local_lambdas(const EigenformRecord& f, const std::vector<long>& primes, const QuadFieldContext& ctx,
                           int M, int D) {
  LocalRing R = f.embedding.value_or(ctx.ring);
  if (R.p != ctx.p)
    throw Error(ErrorCode::kEmbeddingMismatch, f.label + " is embedded at p = " + std::to_string(R.p) +
                                                   ", the field context uses p = " + std::to_string(ctx.p));
  LocalSum out;
  int total = 0;
  bool certain = true;
  for (long q : primes) {
    int kr = ctx.splitting(q);
    if (kr == 0)
      throw Error(ErrorCode::kInvalidArgument, std::to_string(q) + " ramifies in K; no local term is defined there");
    EulerPolynomial P = euler_poly(f, q, ctx);
    if (kr == -1) {
      LocalTerm t = inert_local_term(P, 0, M, R);
      t.source = f.label + " at " + std::to_string(q) + " (inert)";
      certain = certain && t.invariants.certain();
      out.terms.push_back(std::move(t));
      continue;
    }
    int Dq = D;
    FrobeniusExponent u = frobenius_exponent(q, ctx, M + floor_log(ctx.p, Dq) + 2);
    FrobeniusExponent probe{};
    probe.vp_u = u.vp_u;
    int need = std::max(D, local_term_degree(P, probe, ctx.p));
    if (need > Dq) {
      Dq = need;
      u = frobenius_exponent(q, ctx, M + floor_log(ctx.p, Dq) + 2);
    }
    for (int side = 0; side < 2; ++side) {
      LocalTerm t = local_term(P, side == 0 ? u : conjugate(u), Dq, M, R);
      t.conjugate = side;
      t.source = f.label + " at " + std::string(side == 0 ? "l" : "l-bar") + " | " + std::to_string(q) + ", d_K = " +
                 std::to_string(ctx.disc);
      if (t.invariants.certain())
        total += *t.invariants.lambda;
      else
        certain = false;
      out.terms.push_back(std::move(t));
    }
  }
  if (certain) out.total = total;
  return out;
}

}  // namespace iwasawa
