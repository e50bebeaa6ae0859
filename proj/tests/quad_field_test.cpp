#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "generators.hpp"
#include "iwasawa/error.hpp"
#include "iwasawa/quad_field.hpp"

using namespace iwasawa;

namespace {

int gmp_kronecker(long d, long n) {
  mpz_class a = d, b = n;
  return mpz_kronecker(a.get_mpz_t(), b.get_mpz_t());
}

// Every form with a <= sqrt(|d|/3), b in [-a, a], tested for reducedness.
long slow_class_number(long d) {
  long D = -d, h = 0;
  for (long a = 1; 3 * a * a <= D; ++a)
    for (long b = -a; b <= a; ++b) {
      long num = b * b - d;
      if (num % (4 * a)) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if ((b < 0) && (-b == a || a == c)) continue;
      if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
      ++h;
    }
  return h;
}

long analytic_class_number(long d) {
  long D = -d;
  long w = d == -3 ? 6 : (d == -4 ? 4 : 2);
  long s = 0;
  for (long n = 1; n < D; ++n) s += gmp_kronecker(d, n) * n;
  return -w * s / (2 * D);
}

}  // namespace

TEST(Kronecker, Examples) {
  EXPECT_EQ(kronecker(-7, 2), 1);
  EXPECT_EQ(kronecker(-4, 3), -1);
  EXPECT_EQ(kronecker(-7, 14), 0);
  EXPECT_EQ(kronecker(-7, 11), 1);
  EXPECT_EQ(kronecker(5, 1), 1);
}

TEST(Kronecker, MatchesGmpAndIsMultiplicative) {
  gen::Rng rng(3);
  for (int i = 0; i < 20000; ++i) {
    long d = gen::uniform(rng, -100000, 100000);
    if (d == 0) continue;
    long n = gen::uniform(rng, 1, 100000);
    ASSERT_EQ(kronecker(d, n), gmp_kronecker(d, n)) << d << " " << n;
    long m = gen::uniform(rng, 1, 1000);
    EXPECT_EQ(kronecker(d, n * m), kronecker(d, n) * kronecker(d, m));
  }
}

TEST(Kronecker, PeriodicForOneModFour) {
  for (long d : {-3L, -7L, -11L, -15L, -23L, 5L, 13L}) {
    long D = std::labs(d);
    for (long n = 1; n < 200; ++n) EXPECT_EQ(kronecker(d, n), kronecker(d, n + D));
  }
}

TEST(Fundamental, Examples) {
  EXPECT_TRUE(is_fundamental_discriminant(-3));
  EXPECT_TRUE(is_fundamental_discriminant(-4));
  EXPECT_TRUE(is_fundamental_discriminant(-8));
  EXPECT_FALSE(is_fundamental_discriminant(-12));
  EXPECT_FALSE(is_fundamental_discriminant(-16));
  EXPECT_FALSE(is_fundamental_discriminant(-27));
  EXPECT_FALSE(is_fundamental_discriminant(-5));
}

TEST(ClassNumber, Examples) {
  EXPECT_EQ(class_number(-7), 1);
  EXPECT_EQ(class_number(-11), 1);
  EXPECT_EQ(class_number(-23), 3);
  EXPECT_EQ(class_number(-4), 1);
  EXPECT_EQ(class_number(-3), 1);
  EXPECT_EQ(class_number(-163), 1);
  EXPECT_EQ(class_number(-47), 5);
  EXPECT_EQ(class_number(-84), 4);
  try {
    class_number(-12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFundamental);
  }
  try {
    class_number(-1000003, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBoundExceeded);
  }
}

TEST(ClassNumber, AgreesWithOraclesUpTo3000) {
  for (long d = -3; d >= -3000; --d) {
    if (!is_fundamental_discriminant(d)) continue;
    long h = class_number(d);
    ASSERT_EQ(h, slow_class_number(d)) << d;
    ASSERT_EQ(h, analytic_class_number(d)) << d;
  }
}

TEST(QuadFieldContextTest, Validation) {
  auto ctx = QuadFieldContext::make(-7, 11, 6);
  EXPECT_EQ(ctx.h, 1);
  auto s = ctx.split_root;
  EXPECT_TRUE((s * s - PadicNumber::from_integer(ctx.ring, -7, 6)).is_zero());
  EXPECT_LE(s.residue()[0], 5);
  EXPECT_THROW(QuadFieldContext::make(-7, 5, 6), Error);    // 5 inert
  EXPECT_THROW(QuadFieldContext::make(-12, 13, 6), Error);  // not fundamental
  EXPECT_THROW(QuadFieldContext::make(-23, 3, 6), Error);   // 3 | h
}

TEST(FactorLevel, Examples) {
  auto ctx = QuadFieldContext::make(-7, 11, 4);
  auto f = factor_level(1, ctx);
  EXPECT_EQ(f.N_plus, 1);
  EXPECT_EQ(f.N_minus, 1);
  auto ctx2 = QuadFieldContext::make(-7, 29, 4);
  auto g = factor_level(11, ctx2);
  EXPECT_EQ(g.N_plus, 11);
  EXPECT_EQ(g.N_minus, 1);
  auto h = factor_level(5, ctx2);  // 5 is inert in Q(sqrt(-7))
  EXPECT_EQ(h.N_plus, 1);
  EXPECT_EQ(h.N_minus, 5);
  try {
    factor_level(11, ctx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotCoprime);
  }
  EXPECT_THROW(factor_level(14, ctx2), Error);
}

TEST(FactorLevel, PartsMultiplyBack) {
  auto ctx = QuadFieldContext::make(-7, 29, 4);
  for (long N = 1; N < 3000; ++N) {
    if (std::gcd(N, 29L * 7L) != 1) continue;
    auto f = factor_level(N, ctx);
    EXPECT_EQ(f.N_plus * f.N_minus, N);
    for (const auto& lp : f.primes)
      EXPECT_EQ(lp.behaviour == PrimeBehaviour::kSplit, kronecker(-7, lp.prime) == 1);
  }
}

TEST(Ghh, Examples) {
  auto ctx = QuadFieldContext::make(-7, 29, 4);
  EXPECT_TRUE(check_GHH(factor_level(11, ctx)).holds);   // N- = 1
  EXPECT_TRUE(check_GHH(factor_level(15, ctx)).holds);   // 3, 5 inert
  EXPECT_FALSE(check_GHH(factor_level(5, ctx)).holds);   // one inert prime
  EXPECT_FALSE(check_GHH(factor_level(25, ctx)).holds);  // square
}
