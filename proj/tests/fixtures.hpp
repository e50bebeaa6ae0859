#pragma once

// Synthetic local-term tables built from real local_term computations, for the
// transfer round-trip and main-conjecture propagation checks.

#include <vector>

#include "generators.hpp"
#include "iwasawa/local_factors.hpp"
#include "iwasawa/transfer.hpp"

namespace fixtures {

inline const std::vector<long>& small_primes() {
  static const std::vector<long> ps = {2, 3, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73};
  return ps;
}

/// Both conjugate terms at a split prime q != p. a_q = 0 gives the unit term.
inline void add_split_prime(gen::Rng& rng, const iwasawa::LocalRing& R, long q, bool unit_term,
                            iwasawa::LocalSum& out) {
  using namespace iwasawa;
  const long p = R.p;
  const int M = 6;
  while (true) {
    EulerPolynomial P;
    P.prime = q;
    long bound = 1;
    while ((bound + 1) * (bound + 1) <= 4 * q) ++bound;
    long a = unit_term ? 0 : gen::uniform(rng, -bound, bound);
    // mostly good reduction, sometimes multiplicative
    if (unit_term || rng() % 4 != 0) {
      P.cls = ReductionClass::kGood;
      P.coeffs = {Coefficient(1L), Coefficient(-a), Coefficient(q)};
    } else {
      P.cls = ReductionClass::kMultiplicative;
      P.coeffs = {Coefficient(1L), Coefficient(rng() % 2 ? -1L : 1L)};
    }
    if (unit_term) P.coeffs = {Coefficient(1L), Coefficient(0L), Coefficient(0L)};
    FrobeniusExponent u;
    u.prime = q;
    int v = static_cast<int>(gen::uniform(rng, 0, 2));
    u.u = PadicNumber::from_integer(R, gen::with_valuation(rng, p, v, M + 4), M + 4);
    u.vp_u = v;
    int D = local_term_degree(P, u, p);
    LocalTerm t0 = local_term(P, u, D, M, R);
    LocalTerm t1 = local_term(P, conjugate(u), D, M, R);
    if (!t0.invariants.certain() || !t1.invariants.certain()) continue;
    t0.source = "synthetic l | " + std::to_string(q);
    t1.source = "synthetic l-bar | " + std::to_string(q);
    t1.conjugate = 1;
    out.terms.push_back(std::move(t0));
    out.terms.push_back(std::move(t1));
    return;
  }
}

struct FormTables {
  iwasawa::LocalSum sigma0, n3;
};

/// N3~ terms with random Euler data; Sigma_0 = the same terms plus unit terms
/// at the remaining primes, so the two sums agree by construction.
inline FormTables form_tables(gen::Rng& rng, const iwasawa::LocalRing& R) {
  FormTables f;
  std::vector<long> pool;
  for (long q : small_primes())
    if (q != R.p) pool.push_back(q);
  int n3 = static_cast<int>(gen::uniform(rng, 0, 3));
  int extra = static_cast<int>(gen::uniform(rng, 0, 2));
  for (int i = 0; i < n3 + extra; ++i) {
    std::size_t k = static_cast<std::size_t>(gen::uniform(rng, 0, static_cast<long>(pool.size()) - 1));
    long q = pool[k];
    pool.erase(pool.begin() + static_cast<long>(k));
    iwasawa::LocalSum s;
    add_split_prime(rng, R, q, i >= n3, s);
    for (auto& t : s.terms) {
      f.sigma0.terms.push_back(t);
      if (i < n3) f.n3.terms.push_back(t);
    }
  }
  return f;
}

inline iwasawa::PairTables pair_tables(gen::Rng& rng, const iwasawa::LocalRing& R) {
  FormTables a = form_tables(rng, R), b = form_tables(rng, R);
  iwasawa::PairTables t;
  t.sigma0_1 = a.sigma0;
  t.sigma0_2 = b.sigma0;
  t.n3_1_terms = a.n3;
  t.n3_2_terms = b.n3;
  return t;
}

/// lambda(Sel_1) = 2 lambda(L_1), large enough that both transfers stay >= 0.
inline iwasawa::ImcInput consistent_input(gen::Rng& rng, const iwasawa::PairTables& t) {
  int s1 = iwasawa::lambda_sum(t.n3_1_terms), s2 = iwasawa::lambda_sum(t.n3_2_terms);
  long floor = s2 > s1 ? (s2 - s1 + 1) / 2 : 0;
  iwasawa::ImcInput in;
  in.lambda_L = floor + gen::uniform(rng, 0, 5);
  in.lambda_sel = 2 * in.lambda_L;
  in.equality_f1 = in.inclusion_f2 = true;
  return in;
}

/// Shift one local lambda by +-1 in one of the four tables. Returns false when
/// every table is empty.
inline bool mutate(gen::Rng& rng, iwasawa::PairTables& t) {
  iwasawa::LocalSum* tables[4] = {&t.sigma0_1, &t.sigma0_2, &t.n3_1_terms, &t.n3_2_terms};
  std::vector<iwasawa::LocalSum*> live;
  for (auto* s : tables)
    if (!s->terms.empty()) live.push_back(s);
  if (live.empty()) return false;
  auto* s = live[static_cast<std::size_t>(gen::uniform(rng, 0, static_cast<long>(live.size()) - 1))];
  auto& term = s->terms[static_cast<std::size_t>(gen::uniform(rng, 0, static_cast<long>(s->terms.size()) - 1))];
  int& lam = *term.invariants.lambda;
  lam += (lam == 0 || rng() % 2) ? 1 : -1;
  return true;
}

}  // namespace fixtures
