#pragma once

#include <string>
#include <utility>
#include <vector>

#include "iwasawa/padic.hpp"

namespace iwasawa {

/// Kronecker symbol (d/n) for n >= 1.
int kronecker(long d, long n);

bool is_fundamental_discriminant(long d);

inline constexpr long kDefaultClassNumberBound = 1'000'000;

/// Number of reduced primitive forms of discriminant d < 0.
long class_number(long d, long bound = kDefaultClassNumberBound);

/// Trial-division factorization, primes ascending.
std::vector<std::pair<long, int>> factorize(long n);

/// Imaginary quadratic field K = Q(sqrt(d)) together with a split prime p and
/// the square root of d in Z_p that fixes the prime of K above p.
struct QuadFieldContext {
  long disc = 0;
  long h = 0;
  long p = 0;
  int precision = 0;
  LocalRing ring;
  PadicNumber split_root;

  static QuadFieldContext make(long disc, long p, int precision);

  int splitting(long q) const { return kronecker(disc, q); }
};

enum class PrimeBehaviour { kSplit, kInert, kRamified };

std::string to_string(PrimeBehaviour b);

struct LevelPrime {
  long prime = 0;
  int exponent = 0;
  PrimeBehaviour behaviour = PrimeBehaviour::kSplit;
};

struct LevelFactorization {
  long N = 1;
  long N_plus = 1;
  long N_minus = 1;
  std::vector<LevelPrime> primes;

  int exponent(long q) const;
};

LevelFactorization factor_level(long N, const QuadFieldContext& ctx);

struct GhhVerdict {
  bool holds = false;
  std::string reason;
};

/// N^- squarefree with an even number of prime factors.
GhhVerdict check_GHH(const LevelFactorization& fact);

}  // namespace iwasawa
