#include "iwasawa/quad_field.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "iwasawa/error.hpp"

namespace iwasawa {

int kronecker(long d, long n) {
  if (n <= 0) throw Error(ErrorCode::kInvalidArgument, "kronecker needs n >= 1");
  // Cohen, Algorithm 1.4.10, on signed 64-bit words.
  long a = d, b = n;
  if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
  if ((a % 2 == 0) && (b % 2 == 0)) return 0;
  int v = 0;
  while (b % 2 == 0) {
    ++v;
    b /= 2;
  }
  int k = 1;
  if (v % 2 == 1) {
    long r = ((a % 8) + 8) % 8;
    if (r == 3 || r == 5) k = -k;
  }
  while (a != 0) {
    v = 0;
    while (a % 2 == 0) {
      ++v;
      a /= 2;
    }
    if (v % 2 == 1) {
      long r = b % 8;
      if (r == 3 || r == 5) k = -k;
    }
    // reciprocity, with a possibly negative
    long am = ((a % 4) + 4) % 4;
    if (am == 3 && b % 4 == 3) k = -k;
    long r = std::labs(a);
    a = b % r;
    b = r;
  }
  return b == 1 ? k : 0;
}

namespace {

bool squarefree(long n) {
  n = std::labs(n);
  for (long q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    n /= q;
    if (n % q == 0) return false;
  }
  return true;
}

}  // namespace

bool is_fundamental_discriminant(long d) {
  if (d == 0 || d == 1) return false;
  long r = ((d % 4) + 4) % 4;
  if (r == 1) return squarefree(d);
  if (r != 0) return false;
  long m = d / 4;
  long mr = ((m % 4) + 4) % 4;
  return (mr == 2 || mr == 3) && squarefree(m);
}

long class_number(long d, long bound) {
  if (d >= 0 || !is_fundamental_discriminant(d))
    throw Error(ErrorCode::kNotFundamental, std::to_string(d) + " is not a negative fundamental discriminant");
  if (-d > bound)
    throw Error(ErrorCode::kBoundExceeded, "|d| = " + std::to_string(-d) + " exceeds " + std::to_string(bound));
  const long D = -d;
  long h = 0;
  // |b| <= a <= c with b^2 - 4ac = d forces b^2 <= |d|/3.
  for (long b = D % 2; 3 * b * b <= D; b += 2) {
    const long ac = (b * b + D) / 4;
    for (long a = std::max(b, 1L); a * a <= ac; ++a) {
      if (ac % a) continue;
      long c = ac / a;
      if (std::gcd(std::gcd(a, b), c) != 1) continue;
      // (a, -b, c) is reduced too unless b = 0, |b| = a or a = c
      h += (b == 0 || b == a || a == c) ? 1 : 2;
    }
  }
  return h;
}

std::vector<std::pair<long, int>> factorize(long n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "factorize needs n >= 1");
  std::vector<std::pair<long, int>> out;
  for (long q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    if (e) out.emplace_back(q, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

QuadFieldContext QuadFieldContext::make(long disc, long p, int precision) {
  if (disc >= 0 || !is_fundamental_discriminant(disc))
    throw Error(ErrorCode::kNotFundamental, std::to_string(disc) + " is not a negative fundamental discriminant");
  if (precision < 1) throw Error(ErrorCode::kInvalidArgument, "precision must be positive");
  QuadFieldContext ctx;
  ctx.ring = LocalRing::make(p);
  ctx.disc = disc;
  ctx.p = p;
  ctx.precision = precision;
  if (kronecker(disc, p) != 1)
    throw Error(ErrorCode::kInvalidArgument, "p = " + std::to_string(p) + " does not split in Q(sqrt(" +
                                                 std::to_string(disc) + "))");
  ctx.h = class_number(disc);
  if (ctx.h % p == 0)
    throw Error(ErrorCode::kInvalidArgument, "p = " + std::to_string(p) + " divides h(K) = " + std::to_string(ctx.h));
  ctx.split_root = hensel_sqrt(PadicNumber::from_integer(ctx.ring, disc, precision));
  return ctx;
}

std::string to_string(PrimeBehaviour b) {
  switch (b) {
    case PrimeBehaviour::kSplit: return "SPLIT";
    case PrimeBehaviour::kInert: return "INERT";
    case PrimeBehaviour::kRamified: return "RAMIFIED";
  }
  return "?";
}

int LevelFactorization::exponent(long q) const {
  for (const auto& lp : primes)
    if (lp.prime == q) return lp.exponent;
  return 0;
}

LevelFactorization factor_level(long N, const QuadFieldContext& ctx) {
  if (N < 1) throw Error(ErrorCode::kInvalidArgument, "level must be positive");
  if (std::gcd(N, ctx.p * std::labs(ctx.disc)) != 1)
    throw Error(ErrorCode::kNotCoprime, "N = " + std::to_string(N) + " is not coprime to p*d_K = " +
                                            std::to_string(ctx.p * std::labs(ctx.disc)));
  LevelFactorization out;
  out.N = N;
  for (auto [q, e] : factorize(N)) {
    LevelPrime lp{q, e, ctx.splitting(q) == 1 ? PrimeBehaviour::kSplit : PrimeBehaviour::kInert};
    long qe = 1;
    for (int i = 0; i < e; ++i) qe *= q;
    (lp.behaviour == PrimeBehaviour::kSplit ? out.N_plus : out.N_minus) *= qe;
    out.primes.push_back(lp);
  }
  return out;
}

GhhVerdict check_GHH(const LevelFactorization& fact) {
  int count = 0;
  for (const auto& lp : fact.primes) {
    if (lp.behaviour != PrimeBehaviour::kInert) continue;
    if (lp.exponent > 1)
      return {false, "N- is divisible by " + std::to_string(lp.prime) + "^2"};
    ++count;
  }
  if (count % 2 == 1)
    return {false, "N- = " + std::to_string(fact.N_minus) + " has an odd number (" + std::to_string(count) +
                       ") of prime factors"};
  return {true, "N- = " + std::to_string(fact.N_minus) + " is a squarefree product of " +
                    std::to_string(count) + " primes"};
}

}  // namespace iwasawa
