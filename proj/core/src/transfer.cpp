#include "iwasawa/transfer.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "iwasawa/error.hpp"

namespace iwasawa {

namespace {

std::string str(long x) { return std::to_string(x); }

LocalRing ring_of(const EigenformRecord& f, const QuadFieldContext& ctx) { return f.embedding.value_or(ctx.ring); }

bool positive_valuation(const PadicNumber& x) { return x.is_zero() || x.valuation().value > 0; }

[[noreturn]] void refuse(const std::string& why) { throw Error(ErrorCode::kPreconditionFailed, why); }

}  // namespace

std::vector<std::string> require(const HypothesisReport& r, const std::vector<std::string>& names,
                                 const Assertions& a) {
  std::vector<std::string> used, missing;
  for (const auto& h : r.verdicts) {
    if (std::find(names.begin(), names.end(), h.name) == names.end()) continue;
    if (h.verdict == Verdict::kHolds) continue;
    std::string tag = h.name + "(" + h.subject + ") = " + to_string(h.verdict);
    if (std::find(a.overrides.begin(), a.overrides.end(), h.name) != a.overrides.end())
      used.push_back("override: " + tag);
    else
      missing.push_back(tag);
  }
  if (!missing.empty()) {
    std::string msg;
    for (const auto& m : missing) msg += (msg.empty() ? "" : "; ") + m;
    throw Error(ErrorCode::kHypothesisNotMet, msg);
  }
  return used;
}

int lambda_sum(const LocalSum& s) {
  int total = 0;
  for (const auto& t : s.terms) {
    if (!t.invariants.certain())
      throw Error(ErrorCode::kUnknownLocalTerm, "lambda of the term " + t.source + " is not determined");
    total += *t.invariants.lambda;
  }
  return total;
}

TransferResult transfer_algebraic(long lambda_in, const LocalSum& from, const LocalSum& to) {
  if (lambda_in < 0) throw Error(ErrorCode::kInvalidArgument, "lambda must be nonnegative");
  TransferResult r;
  r.lambda_in = lambda_in;
  r.sum_from = lambda_sum(from);
  r.sum_to = lambda_sum(to);
  r.value = lambda_in + r.sum_from - r.sum_to;
  r.equation = "lambda(Sel_to) = lambda(Sel_from) + sum_Sigma0 lambda(P^from) - sum_Sigma0 lambda(P^to) = " +
               str(lambda_in) + " + " + str(r.sum_from) + " - " + str(r.sum_to) + " = " + str(r.value);
  if (r.value < 0) throw Error(ErrorCode::kNegativeResult, r.equation);
  return r;
}

TransferResult transfer_analytic(long lambda_in, const LocalSum& from, const LocalSum& to) {
  if (lambda_in < 0) throw Error(ErrorCode::kInvalidArgument, "lambda must be nonnegative");
  TransferResult r;
  r.lambda_in = lambda_in;
  r.sum_from = lambda_sum(from);
  r.sum_to = lambda_sum(to);
  long twice = 2 * lambda_in + r.sum_from - r.sum_to;
  r.equation = "2 lambda(L_to) = 2 lambda(L_from) + sum_N3 lambda(P^from) - sum_N3 lambda(P^to) = 2*" +
               str(lambda_in) + " + " + str(r.sum_from) + " - " + str(r.sum_to) + " = " + str(twice);
  if (twice % 2 != 0) throw Error(ErrorCode::kParityViolation, r.equation + " is odd");
  r.value = twice / 2;
  if (r.value < 0) throw Error(ErrorCode::kNegativeResult, r.equation);
  return r;
}

PairTables local_tables(const EigenformRecord& f1, const EigenformRecord& f2, const QuadFieldContext& ctx,
                        const HypothesisReport& hyp, int M, int D) {
  PairTables t;
  std::set<long> s0;
  for (const auto* fact : {&hyp.fact1, &hyp.fact2})
    for (const auto& lp : fact->primes)
      if (lp.behaviour == PrimeBehaviour::kSplit) s0.insert(lp.prime);
  t.sigma0.assign(s0.begin(), s0.end());
  t.n3_1 = hyp.cls1.primes_with(NtildeRole::kN3);
  t.n3_2 = hyp.cls2.primes_with(NtildeRole::kN3);
  t.sigma0_1 = sum_local_lambdas(f1, t.sigma0, ctx, M, D);
  t.sigma0_2 = sum_local_lambdas(f2, t.sigma0, ctx, M, D);
  t.n3_1_terms = sum_local_lambdas(f1, t.n3_1, ctx, M, D);
  t.n3_2_terms = sum_local_lambdas(f2, t.n3_2, ctx, M, D);
  return t;
}

std::string to_string(ImcStatus s) {
  switch (s) {
    case ImcStatus::kPropagated: return "PROPAGATED";
    case ImcStatus::kConflict: return "CONFLICT";
    case ImcStatus::kParityViolation: return "PARITY_VIOLATION";
  }
  return "?";
}

ImcVerdict imc_propagate(const ImcInput& in, const PairTables& t) {
  if (!in.equality_f1) throw Error(ErrorCode::kHypothesisNotMet, "full main-conjecture equality for f1 not asserted");
  if (!in.inclusion_f2) throw Error(ErrorCode::kHypothesisNotMet, "one-sided divisibility for f2 not asserted");
  ImcVerdict v;
  auto conflict = [&](std::string eq) {
    v.status = ImcStatus::kConflict;
    v.equation = std::move(eq);
    return v;
  };
  if (in.lambda_sel != 2 * in.lambda_L)
    return conflict("lambda(Sel_1) = 2 lambda(L_1) fails on input: " + str(in.lambda_sel) + " != 2*" +
                    str(in.lambda_L));
  v.steps.push_back("input: lambda(Sel_1) = " + str(in.lambda_sel) + " = 2 lambda(L_1)");

  const LocalSum* s0[2] = {&t.sigma0_1, &t.sigma0_2};
  const LocalSum* n3[2] = {&t.n3_1_terms, &t.n3_2_terms};
  for (int i = 0; i < 2; ++i) {
    int a = lambda_sum(*s0[i]), b = lambda_sum(*n3[i]);
    std::string eq = "f" + str(i + 1) + ": sum_{q | N3~} lambda(P_q) = sum_{l in Sigma_0} lambda(P_l): " + str(b) +
                     (a == b ? " = " : " != ") + str(a);
    if (a != b) return conflict(eq + " (terms off N3~ must be units)");
    v.steps.push_back(eq);
  }

  TransferResult alg, ana;
  try {
    alg = transfer_algebraic(in.lambda_sel, t.sigma0_1, t.sigma0_2);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNegativeResult) throw;
    return conflict(e.what());
  }
  try {
    ana = transfer_analytic(in.lambda_L, t.n3_1_terms, t.n3_2_terms);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParityViolation) {
      v.status = ImcStatus::kParityViolation;
      v.equation = e.what();
      return v;
    }
    if (e.code() != ErrorCode::kNegativeResult) throw;
    return conflict(e.what());
  }
  v.steps.push_back(alg.equation);
  v.steps.push_back(ana.equation);
  v.lambda_sel2 = alg.value;
  v.lambda_L2 = ana.value;
  if (alg.value != 2 * ana.value)
    return conflict("lambda(Sel_2) = 2 lambda(L_2): " + str(alg.value) + " != 2*" + str(ana.value));
  v.steps.push_back("lambda(Sel_2) = " + str(alg.value) + " = 2 lambda(L_2); with the one-sided divisibility for f2 "
                    "the main conjecture holds for f2");
  v.status = ImcStatus::kPropagated;
  return v;
}

HeegnerConstants heegner_constants(const EigenformRecord& f, const NtildeClassification& cls,
                                   const QuadFieldContext& ctx, bool alpha_asserted, int M) {
  const LocalRing R = ring_of(f, ctx);
  const long p = ctx.p;
  HeegnerConstants h;
  h.label = f.label;
  h.alpha_asserted = alpha_asserted;
  PadicNumber one = PadicNumber::from_integer(R, 1, M);
  PadicNumber integral = one;

  for (const auto& np : cls.primes) {
    if (np.role != NtildeRole::kN1 && np.role != NtildeRole::kN2) continue;
    HeegnerFactor x;
    x.kind = "c(f) " + to_string(np.role);
    x.prime = np.prime;
    x.value = unit_factor(np.prime, f.a(np.prime), np.role).at(R, M);
    x.flagged = positive_valuation(x.value);
    if (x.flagged) {
      x.note = "positive valuation: c(f) is not verified to be a unit";
      h.cf_verified = false;
    }
    integral = integral * x.value;
    h.factors.push_back(std::move(x));
  }

  for (long q : cls.primes_with(NtildeRole::kN3)) {
    if (cls.M3 % q != 0) continue;
    HeegnerFactor x;
    x.prime = q;
    PadicNumber b = f.a(q).at(R, M);
    PadicNumber qinv = PadicNumber::from_rational(R, mpq_class(1, q), M);
    PadicNumber e = f.level % q == 0 ? one - b * qinv : one - b * qinv + qinv;
    x.kind = f.level % q == 0 ? "M3, q | N: (1 - b_q/q)^2" : "M3, q not dividing N: (1 - b_q/q + 1/q)^2";
    x.value = e * e;
    x.flagged = positive_valuation(x.value);
    if (x.flagged) x.note = "positive valuation: forces both sides to 0 mod pi";
    integral = integral * x.value;
    h.factors.push_back(std::move(x));
  }

  {
    HeegnerFactor x;
    x.kind = "p-factor: (1 - b_p/p + 1/p)^2";
    x.prime = p;
    const Coefficient& bp = f.a(p);
    PadicNumber num = (Coefficient(p + 1) - bp).at(R, M);
    PadicNumber p2 = PadicNumber::from_integer(R, p * p, M + 2 * R.e);
    x.value = (num * num) / p2;
    x.note = "not integral: compared through p^2 times the constant, (p + 1 - b_p)^2";
    h.normalized = integral * num * num;
    h.product = integral * x.value;
    h.factors.push_back(std::move(x));
  }
  return h;
}

std::string to_string(HeegnerVerdict v) {
  switch (v) {
    case HeegnerVerdict::kCongruent: return "CONGRUENT";
    case HeegnerVerdict::kNotCongruent: return "NOT_CONGRUENT";
    case HeegnerVerdict::kUnknown: return "UNKNOWN";
  }
  return "?";
}

HeegnerComparison compare_heegner(const HeegnerConstants& a, const HeegnerConstants& b) {
  if (!(a.normalized.ring() == b.normalized.ring()))
    throw Error(ErrorCode::kEmbeddingMismatch, "constants live in different rings");
  HeegnerComparison c;
  c.lhs = a.normalized.with_precision(1).to_string();
  c.rhs = b.normalized.with_precision(1).to_string();
  for (const auto* h : {&a, &b}) {
    if (!h->alpha_asserted) c.reasons.push_back(h->label + ": alpha(f) unit not asserted");
    if (!h->cf_verified) c.reasons.push_back(h->label + ": an inert c(f) factor has positive valuation");
  }
  PadicNumber d = a.normalized - b.normalized;
  if (d.precision() < 1) c.reasons.push_back("difference not known modulo pi");
  if (!c.reasons.empty()) return c;
  c.verdict = positive_valuation(d) ? HeegnerVerdict::kCongruent : HeegnerVerdict::kNotCongruent;
  for (const auto* h : {&a, &b})
    for (const auto& x : h->factors)
      if (x.flagged) c.reasons.push_back(h->label + ": factor at " + str(x.prime) + " vanishes mod pi");
  return c;
}

std::string to_string(CertificateSide s) { return s == CertificateSide::kAlgebraic ? "ALGEBRAIC" : "ANALYTIC"; }

MuCertificate mu_certificate(const EigenformRecord& f, long chi, long N1, long N2, long N0,
                             const QuadFieldContext& ctx, CertificateSide side,
                             const std::optional<EigenformRecord>& reference) {
  const long p = ctx.p;
  if (p != 3 && p != 5) refuse("p = " + str(p) + " is not 3 or 5");
  if (!is_fundamental_discriminant(chi)) refuse(str(chi) + " is not a fundamental discriminant");
  if (quadratic_character(chi, p) != -1)
    refuse("chi(p) = " + str(quadratic_character(chi, p)) + " for chi = chi_" + str(chi) + ", need -1");
  const LocalRing R = ring_of(f, ctx);
  if (R.p != p) refuse(f.label + " is embedded at p = " + str(R.p));

  MuCertificate c;
  c.side = side;
  try {
    c.descent = check_partial_eisenstein(f, chi, chi, N1, N2, N0, R);
  } catch (const Error& e) {
    refuse(std::string("partial Eisenstein descent: ") + e.what());
  }
  if (c.descent.holds != Verdict::kHolds)
    refuse("partial Eisenstein descent by (chi, chi, " + str(N1) + ", " + str(N2) + ", " + str(N0) + ") is " +
           to_string(c.descent.holds) +
           (c.descent.witnesses.empty() ? "" : " (first witness l = " + str(c.descent.witnesses[0]) + ")"));

  const long cond = std::labs(chi);
  LevelFactorization fact;
  try {
    fact = factor_level(f.level * cond, ctx);
  } catch (const Error& e) {
    refuse(std::string("level of f times cond(chi): ") + e.what());
  }
  GhhVerdict ghh = check_GHH(fact);
  if (!ghh.holds) refuse("GHH for N cond(chi) = " + str(fact.N) + ": " + ghh.reason);
  if (fact.N_minus != 1) refuse("N- = " + str(fact.N_minus) + ", need 1");
  for (long q : {11L, 19L})
    if (ctx.splitting(q) != 1) refuse(str(q) + " does not split in K");

  const std::string base = p == 5 ? "11a" : "19a";
  c.reference_curve = p == 5 ? "11a.2" : "19.a2";
  EigenformRecord ref = reference ? *reference : reference_form(base, reference_form_limit(base));
  if (ref.level != (p == 5 ? 11 : 19)) refuse("reference form " + ref.label + " has the wrong level");
  EigenformRecord g = twist(ref, chi);
  c.reference_form = g.label;
  c.congruence = check_congruence(f, g, R, 1, std::lcm(f.level, g.level));
  if (c.congruence.holds == Verdict::kFails)
    refuse("congruence with " + g.label + " fails at n = " + str(c.congruence.witnesses.at(0)));

  LevelFactorization ff = factor_level(f.level, ctx), fg = factor_level(g.level, ctx);
  if (side == CertificateSide::kAlgebraic) {
    c.hypotheses.push_back(check_H0(f, ctx, ff, fg));
    c.hypotheses.push_back(check_H0(g, ctx, ff, fg));
  } else {
    c.hypotheses.push_back(check_div(f, ff, p));
    c.hypotheses.push_back(check_div(g, fg, p));
    long N = choose_common_level(f.level, g.level, LevelStrategy::kRelaxed, c.congruence.level_mismatches);
    c.hypotheses.push_back(check_unit_condition(f, classify_ntilde(N, f.level, ctx), R));
    c.hypotheses.push_back(check_unit_condition(g, classify_ntilde(N, g.level, ctx), R));
  }

  c.steps.push_back("E = " + c.reference_curve + ": E[" + str(p) + "] = F_p + F_p(omega) as Galois modules");
  c.steps.push_back("g = " + g.label + " (twist of E by chi_" + str(chi) + "); H^0(K_v, E^chi[p^inf]) = 0 since chi(p) = -1");
  c.steps.push_back("descent verified to l <= " + str(c.descent.bound) +
                    ": residual representation of f is F_p(chi) + F_p(chi omega)");
  c.steps.push_back("a_n(f) = a_n(g) mod pi for n coprime to p N cond(g): " + to_string(c.congruence.holds) +
                    " (checked " + str(c.congruence.checked_bound) + " of " + str(c.congruence.required_bound) + ")");
  if (side == CertificateSide::kAlgebraic) {
    c.steps.push_back("mu of the dual BDP Selmer group of g vanishes (cited input)");
    c.steps.push_back("equality of Selmer invariants for congruent forms under (H0) transfers mu = 0 to f");
    c.conclusion = "mu(Sel^BDP(K_inf, A_f)^dual) = 0";
  } else {
    c.steps.push_back("mu(L_p^BDP(g)) = 0 (cited input); N- = 1 gives alpha(g) = 1, (div) and (unit)");
    c.steps.push_back("analytic lambda/mu transfer for congruent forms applies to f and g");
    c.conclusion = "mu(L_p^BDP(f)) = 0";
  }
  if (c.congruence.holds == Verdict::kUnknown)
    c.steps.push_back("congruence check incomplete: the certificate is conditional on it");
  return c;
}

}  // namespace iwasawa
