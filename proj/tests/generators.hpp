#pragma once

// Fixed-seed generators shared by the property tests and the acceptance runner.

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <vector>

namespace gen {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline mpz_class power(long p, long k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(k));
  return r;
}

// Random integer of exact p-adic valuation v below p^M (0 when v >= M).
inline mpz_class with_valuation(Rng& rng, long p, int v, int M) {
  if (v >= M) return 0;
  mpz_class unit = uniform(rng, 1, p - 1);
  mpz_class top = power(p, M - v - 1);
  mpz_class rest = static_cast<long>(rng() % 1000003);
  rest %= top;
  unit += p * rest;
  return unit * power(p, v);
}

/// Coefficients c_0..c_D mod p^M with a planted (mu, lambda): c_lambda has
/// valuation mu, earlier ones more, later ones at least mu.
inline std::vector<mpz_class> planted_series(Rng& rng, long p, int D, int M, int mu, int lambda) {
  std::vector<mpz_class> c(static_cast<std::size_t>(D) + 1);
  for (int i = 0; i <= D; ++i) {
    int v;
    if (i < lambda)
      v = static_cast<int>(uniform(rng, mu + 1, M));
    else if (i == lambda)
      v = mu;
    else
      v = static_cast<int>(uniform(rng, mu, M));
    c[static_cast<std::size_t>(i)] = with_valuation(rng, p, v, M);
    if (rng() % 2 == 0) c[static_cast<std::size_t>(i)] = -c[static_cast<std::size_t>(i)];
  }
  return c;
}

/// Unstructured coefficients: each one zero, a unit, or p^v times a unit.
inline std::vector<mpz_class> wild_series(Rng& rng, long p, int D, int M) {
  std::vector<mpz_class> c(static_cast<std::size_t>(D) + 1);
  int floor = static_cast<int>(uniform(rng, 0, M - 1));
  for (auto& x : c) {
    int v = static_cast<int>(uniform(rng, floor, M + 1));
    x = with_valuation(rng, p, v, M);
  }
  return c;
}

}  // namespace gen
