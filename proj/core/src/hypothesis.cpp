#include "iwasawa/hypothesis.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "iwasawa/error.hpp"

namespace iwasawa {

namespace {

std::string qname(long q) { return "q=" + std::to_string(q); }

// v(x) > 0, from a value known to at least one digit
bool divisible(const Coefficient& x, const LocalRing& R) {
  auto u = x.is_unit(R);
  if (!u) throw Error(ErrorCode::kPrecisionExhausted, "value not known modulo pi");
  return !*u;
}

Verdict aggregate(const std::vector<Evidence>& ev) {
  Verdict v = Verdict::kHolds;
  for (const auto& e : ev) v = combine(v, e.verdict);
  return v;
}

LocalRing ring_of(const EigenformRecord& f, const QuadFieldContext& ctx) { return f.embedding.value_or(ctx.ring); }

}  // namespace

HypothesisVerdict check_div(const EigenformRecord& f, const LevelFactorization& fact, long p) {
  HypothesisVerdict h;
  h.name = "div";
  h.subject = f.label;
  h.citation = "(div): N- != 1 forces p not dividing prod_{q | N} (q - 1) q (q + 1)";
  if (fact.N_minus == 1) {
    h.verdict = Verdict::kHolds;
    h.evidence.push_back({"level", Verdict::kHolds, "vacuous", "N- = 1"});
    return h;
  }
  for (const auto& lp : fact.primes) {
    long q = lp.prime;
    bool bad = (q - 1) % p == 0 || q % p == 0 || (q + 1) % p == 0;
    h.evidence.push_back({qname(q), bad ? Verdict::kFails : Verdict::kHolds, "divisibility",
                          "(q-1)q(q+1) = " + std::to_string((q - 1) * q * (q + 1)) + (bad ? " is" : " is not") +
                              " divisible by " + std::to_string(p)});
  }
  h.verdict = aggregate(h.evidence);
  return h;
}

HypothesisVerdict check_sqfree(const EigenformRecord& f, const LevelFactorization& fact) {
  HypothesisVerdict h;
  h.name = "sq-fr";
  h.subject = f.label;
  h.citation = "(sq-fr): N- != 1 forces N squarefree";
  if (fact.N_minus == 1) {
    h.verdict = Verdict::kHolds;
    h.evidence.push_back({"level", Verdict::kHolds, "vacuous", "N- = 1"});
    return h;
  }
  for (const auto& lp : fact.primes)
    h.evidence.push_back({qname(lp.prime), lp.exponent > 1 ? Verdict::kFails : Verdict::kHolds, "exponent",
                          std::to_string(lp.prime) + "^" + std::to_string(lp.exponent) + " || N"});
  h.verdict = aggregate(h.evidence);
  return h;
}

HypothesisVerdict check_H0(const EigenformRecord& f, const QuadFieldContext& ctx, const LevelFactorization& fact1,
                           const LevelFactorization& fact2) {
  const LocalRing R = ring_of(f, ctx);
  const long p = ctx.p;
  HypothesisVerdict h;
  h.name = "H0";
  h.subject = f.label;
  h.citation = "(H0): H^0(K_w, A) = 0 for w | p N1- N2-, via residual fixed-vector criteria";

  {
    // (i) w | p, K_w = Q_p
    Coefficient x = Coefficient(1 + p) - f.a(p);
    bool zero = divisible(x, R);
    h.evidence.push_back({"p", zero ? Verdict::kUnknown : Verdict::kHolds, "w | p: v(1 + p - a_p) = 0",
                          "1 + p - a_p = " + x.to_string() + (zero ? ", not a unit: NOT_VERIFIED" : ", a unit")});
  }
  std::set<long> inert;
  for (const auto* fact : {&fact1, &fact2})
    for (const auto& lp : fact->primes)
      if (lp.behaviour == PrimeBehaviour::kInert) inert.insert(lp.prime);
  for (long q : inert) {
    int k = 0;
    for (long N = f.level; N % q == 0; N /= q) ++k;
    Evidence e;
    e.place = qname(q);
    if (k == 0) {
      // (ii) good reduction: Frob_w = Frob_q^2 fixes a residual vector iff
      // det(1 - Frob_q^2) = (1 + q)^2 - a_q^2 vanishes mod pi
      const Coefficient& a = f.a(q);
      Coefficient x = Coefficient((1 + q) * (1 + q)) - a * a;
      bool zero = divisible(x, R);
      e.criterion = "inert good q: v((1+q)^2 - a_q^2) = 0";
      e.verdict = zero ? Verdict::kFails : Verdict::kHolds;
      e.detail = "(1+q)^2 - a_q^2 = " + x.to_string() + (zero ? ": residual fixed vector" : ": a unit");
    } else if (k == 1) {
      // (iii) multiplicative: the cyclotomic line is fixed iff mu_p lies in K_w
      mpz_class q2m1 = q * q - 1;
      bool mu_p = padic_valuation(q2m1, p) > 0;
      e.criterion = "inert multiplicative q: v(q^2 - 1) = 0 and p does not divide ord_q(j-denominator)";
      if (mu_p) {
        e.verdict = Verdict::kFails;
        e.detail = "p | q^2 - 1: mu_p is a fixed line";
      } else {
        auto it = f.j_denominator_valuations.find(q);
        if (it == f.j_denominator_valuations.end()) {
          e.verdict = Verdict::kUnknown;
          e.detail = "v(q^2 - 1) = 0 but no Tate-parameter data; the quotient may split over K_w";
        } else if (it->second % p == 0) {
          e.verdict = Verdict::kUnknown;
          e.detail = "p | ord_q(j-denominator) = " + std::to_string(it->second);
        } else {
          e.verdict = Verdict::kHolds;
          e.detail = "v(q^2 - 1) = 0, ord_q(j-denominator) = " + std::to_string(it->second);
        }
      }
    } else {
      e.criterion = "additive q: undecided";
      e.verdict = Verdict::kUnknown;
      e.detail = std::to_string(q) + "^" + std::to_string(k) + " | N";
    }
    h.evidence.push_back(std::move(e));
  }
  h.verdict = aggregate(h.evidence);
  return h;
}

std::string to_string(NtildeRole r) {
  switch (r) {
    case NtildeRole::kN1: return "N1~";
    case NtildeRole::kN2: return "N2~";
    case NtildeRole::kN3: return "N3~";
    case NtildeRole::kUnchanged: return "UNCHANGED";
  }
  return "?";
}

std::vector<long> NtildeClassification::primes_with(NtildeRole r) const {
  std::vector<long> out;
  for (const auto& np : primes)
    if (np.role == r) out.push_back(np.prime);
  return out;
}

NtildeClassification classify_ntilde(long N, long N_prime, const QuadFieldContext& ctx) {
  if (N < 1 || N_prime < 1 || N % N_prime != 0)
    throw Error(ErrorCode::kNotDivisible, std::to_string(N_prime) + " does not divide " + std::to_string(N));
  NtildeClassification c;
  c.N = N;
  c.N_prime = N_prime;
  const long quotient = N / N_prime;
  for (auto [q, e] : factorize(N)) {
    int s = ctx.splitting(q);
    if (s == 0) throw Error(ErrorCode::kNotCoprime, std::to_string(q) + " ramifies in K");
    NtildePrime np{q, NtildeRole::kUnchanged, s == 1 ? PrimeBehaviour::kSplit : PrimeBehaviour::kInert};
    const bool in_quot = quotient % q == 0, in_old = N_prime % q == 0;
    if (s == -1 && !in_old)
      np.role = NtildeRole::kN1;
    else if (s == -1 && in_quot)
      np.role = NtildeRole::kN2;
    else if (s == 1 && in_quot)
      np.role = NtildeRole::kN3;
    if (np.role == NtildeRole::kN1) c.N1 *= q;
    if (np.role == NtildeRole::kN2) c.N2 *= q;
    if (np.role == NtildeRole::kN3) c.N3 *= q;
    c.primes.push_back(np);
  }
  return c;
}

void refine_relaxed(NtildeClassification& cls, const std::vector<long>& mismatch_primes) {
  cls.M1 = cls.M2 = cls.M3 = 1;
  for (const auto& np : cls.primes) {
    if (std::find(mismatch_primes.begin(), mismatch_primes.end(), np.prime) == mismatch_primes.end()) continue;
    if (np.role == NtildeRole::kN1) cls.M1 *= np.prime;
    if (np.role == NtildeRole::kN2) cls.M2 *= np.prime;
    if (np.role == NtildeRole::kN3) cls.M3 *= np.prime;
  }
}

Coefficient unit_factor(long q, const Coefficient& b, NtildeRole role) {
  switch (role) {
    case NtildeRole::kN1: return (Coefficient(1 + q) - b) * (Coefficient(1 + q) + b);
    case NtildeRole::kN2: return (Coefficient(q) - b) * (Coefficient(q) + b);
    default: return Coefficient(1L);
  }
}

HypothesisVerdict check_unit_condition(const EigenformRecord& f, const NtildeClassification& cls,
                                       const LocalRing& ring) {
  HypothesisVerdict h;
  h.name = "unit";
  h.subject = f.label;
  h.citation = "(unit): prod_{q | N1~} (1+q-b_q)(1+q+b_q) prod_{q | N2~} (q-b_q)(q+b_q) is a unit";
  Coefficient product(1L);
  for (const auto& np : cls.primes) {
    if (np.role != NtildeRole::kN1 && np.role != NtildeRole::kN2) continue;
    Coefficient x = unit_factor(np.prime, f.a(np.prime), np.role);
    product = product * x;
    bool zero = divisible(x, ring);
    h.evidence.push_back({qname(np.prime), zero ? Verdict::kFails : Verdict::kHolds, to_string(np.role) + " factor",
                          x.to_string() + (zero ? " is divisible by pi" : " is a unit")});
  }
  h.verdict = aggregate(h.evidence);
  h.evidence.push_back({"product", h.verdict, "v(product) = 0", product.to_string()});
  return h;
}

std::string to_string(LevelStrategy s) { return s == LevelStrategy::kSquare ? "SQUARE" : "RELAXED"; }

long choose_common_level(long N1, long N2, LevelStrategy strategy, const std::vector<long>& mismatch_primes) {
  if (N1 < 1 || N2 < 1) throw Error(ErrorCode::kInvalidArgument, "levels must be positive");
  long L = std::lcm(N1, N2);
  long out = 1;
  for (auto [q, e] : factorize(L)) {
    int k = e;
    if (strategy == LevelStrategy::kSquare) {
      k += k % 2;
    } else if (std::find(mismatch_primes.begin(), mismatch_primes.end(), q) != mismatch_primes.end()) {
      k = std::max(k, 2);
    }
    for (int i = 0; i < k; ++i) out *= q;
  }
  return out;
}

const HypothesisVerdict* HypothesisReport::find(const std::string& name, const std::string& subject) const {
  for (const auto& h : verdicts)
    if (h.name == name && (subject.empty() || h.subject == subject)) return &h;
  return nullptr;
}

Verdict HypothesisReport::overall() const {
  Verdict v = Verdict::kHolds;
  for (const auto& h : verdicts) v = combine(v, h.verdict);
  return v;
}

HypothesisReport assess_pair(const EigenformRecord& f1, const EigenformRecord& f2, const QuadFieldContext& ctx,
                             LevelStrategy strategy) {
  HypothesisReport r;
  r.strategy = strategy;
  r.fact1 = factor_level(f1.level, ctx);
  r.fact2 = factor_level(f2.level, ctx);
  const LocalRing R = ring_of(f1, ctx);
  for (const auto* pr : {&f1, &f2}) {
    const auto& fact = pr == &f1 ? r.fact1 : r.fact2;
    GhhVerdict g = check_GHH(fact);
    HypothesisVerdict h;
    h.name = "GHH";
    h.subject = pr->label;
    h.verdict = g.holds ? Verdict::kHolds : Verdict::kFails;
    h.evidence.push_back({"level", h.verdict, "N- squarefree with an even number of primes", g.reason});
    h.citation = "(GHH): generalized Heegner hypothesis";
    r.verdicts.push_back(std::move(h));
  }

  r.congruence = check_congruence(f1, f2, R, 1, std::lcm(f1.level, f2.level));
  {
    HypothesisVerdict h;
    h.name = "Cong";
    h.subject = f1.label + " ~ " + f2.label;
    h.verdict = r.congruence.holds;
    std::string detail = "checked " + std::to_string(r.congruence.checked_bound) + " of " +
                         std::to_string(r.congruence.required_bound) + " coefficients";
    if (!r.congruence.witnesses.empty()) detail += ", first witness n = " + std::to_string(r.congruence.witnesses[0]);
    h.evidence.push_back({"coefficients", h.verdict, "a_n(f1) = a_n(f2) mod pi away from the levels, to the Sturm bound",
                          detail});
    for (const auto& n : r.congruence.notes) h.evidence.push_back({"note", Verdict::kHolds, "caveat", n});
    h.citation = "(Cong): residual congruence, up to semisimplification";
    r.verdicts.push_back(std::move(h));
  }

  r.common_level = choose_common_level(f1.level, f2.level, strategy, r.congruence.level_mismatches);
  r.cls1 = classify_ntilde(r.common_level, f1.level, ctx);
  r.cls2 = classify_ntilde(r.common_level, f2.level, ctx);
  refine_relaxed(r.cls1, r.congruence.level_mismatches);
  refine_relaxed(r.cls2, r.congruence.level_mismatches);

  r.verdicts.push_back(check_H0(f1, ctx, r.fact1, r.fact2));
  r.verdicts.push_back(check_H0(f2, ctx, r.fact1, r.fact2));
  r.verdicts.push_back(check_div(f1, r.fact1, ctx.p));
  r.verdicts.push_back(check_div(f2, r.fact2, ctx.p));
  r.verdicts.push_back(check_sqfree(f1, r.fact1));
  r.verdicts.push_back(check_sqfree(f2, r.fact2));
  r.verdicts.push_back(check_unit_condition(f1, r.cls1, R));
  r.verdicts.push_back(check_unit_condition(f2, r.cls2, ring_of(f2, ctx)));
  return r;
}

}  // namespace iwasawa
