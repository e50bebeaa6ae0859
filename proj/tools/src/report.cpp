#include "report.hpp"

#include <sstream>

namespace iwasawa::report {

std::string num(long x) { return std::to_string(x); }

Json nums(const std::vector<long>& xs) {
  Json a = Json::array();
  for (long x : xs) a.push_back(num(x));
  return a;
}

namespace {

Json opt(const std::optional<int>& x) { return x ? Json(num(*x)) : Json(nullptr); }

Json padic(const PadicNumber& x) {
  return Json{{"value", x.to_string()}, {"precision", num(x.precision())}, {"valuation", to_string(x.valuation())}};
}

Json strings(const std::vector<std::string>& xs) { return Json(xs); }

}  // namespace

Json to_json(const MuLambda& m) {
  return Json{{"mu", opt(m.mu)}, {"lambda", opt(m.lambda)}, {"certainty", to_string(m.certainty)}};
}

Json to_json(const LevelFactorization& f) {
  Json primes = Json::array();
  for (const auto& lp : f.primes)
    primes.push_back({{"q", num(lp.prime)}, {"exponent", num(lp.exponent)}, {"behaviour", to_string(lp.behaviour)}});
  return Json{{"N", num(f.N)}, {"N_plus", num(f.N_plus)}, {"N_minus", num(f.N_minus)}, {"primes", primes}};
}

Json to_json(const HypothesisVerdict& h) {
  Json ev = Json::array();
  for (const auto& e : h.evidence)
    ev.push_back({{"place", e.place}, {"verdict", to_string(e.verdict)}, {"criterion", e.criterion},
                  {"detail", e.detail}});
  return Json{{"name", h.name}, {"subject", h.subject}, {"verdict", to_string(h.verdict)}, {"evidence", ev},
              {"citation", h.citation}};
}

Json to_json(const NtildeClassification& c) {
  Json primes = Json::array();
  for (const auto& p : c.primes)
    primes.push_back({{"q", num(p.prime)}, {"role", to_string(p.role)}, {"behaviour", to_string(p.behaviour)}});
  return Json{{"N", num(c.N)},   {"N_prime", num(c.N_prime)}, {"N1", num(c.N1)}, {"N2", num(c.N2)},
              {"N3", num(c.N3)}, {"M1", num(c.M1)},           {"M2", num(c.M2)}, {"M3", num(c.M3)},
              {"primes", primes}};
}

Json to_json(const CongruenceVerdict& c) {
  return Json{{"holds", to_string(c.holds)},
              {"required_bound", num(c.required_bound)},
              {"checked_bound", num(c.checked_bound)},
              {"precision", num(c.precision)},
              {"witnesses", nums(c.witnesses)},
              {"excluded_primes", nums(c.excluded_primes)},
              {"undecided", nums(c.undecided)},
              {"level_mismatches", nums(c.level_mismatches)},
              {"p_tag", to_string(c.p_tag)},
              {"notes", strings(c.notes)}};
}

Json to_json(const HypothesisReport& r) {
  Json vs = Json::array();
  for (const auto& h : r.verdicts) vs.push_back(to_json(h));
  return Json{{"verdicts", vs},
              {"overall", to_string(r.overall())},
              {"congruence", to_json(r.congruence)},
              {"factorization_1", to_json(r.fact1)},
              {"factorization_2", to_json(r.fact2)},
              {"common_level", num(r.common_level)},
              {"strategy", to_string(r.strategy)},
              {"ntilde_1", to_json(r.cls1)},
              {"ntilde_2", to_json(r.cls2)},
              {"asserted", {{"fg", r.fg}, {"mu", r.mu}, {"alpha_unit", r.alpha_unit}}}};
}

Json to_json(const LocalTerm& t) {
  Json j{{"q", num(t.prime)},
         {"prime_of_K", t.split ? (t.conjugate ? "l-bar" : "l") : "inert"},
         {"class", to_string(t.cls)},
         {"u_valuation", opt(t.vp_u)},
         {"mu", opt(t.invariants.mu)},
         {"lambda", opt(t.invariants.lambda)},
         {"certainty", to_string(t.invariants.certainty)},
         {"source", t.source},
         {"flags", strings(t.flags)}};
  return j;
}

Json to_json(const LocalSum& s) {
  Json terms = Json::array();
  for (const auto& t : s.terms) terms.push_back(to_json(t));
  return Json{{"total", opt(s.total)}, {"terms", terms}};
}

Json to_json(const TransferResult& t) {
  return Json{{"lambda_in", num(t.lambda_in)},
              {"value", num(t.value)},
              {"sum_from", num(t.sum_from)},
              {"sum_to", num(t.sum_to)},
              {"equation", t.equation}};
}

Json to_json(const ImcVerdict& v) {
  Json j{{"status", to_string(v.status)}, {"equation", v.equation}, {"steps", strings(v.steps)}};
  j["lambda_sel_2"] = v.lambda_sel2 ? Json(num(*v.lambda_sel2)) : Json(nullptr);
  j["lambda_L_2"] = v.lambda_L2 ? Json(num(*v.lambda_L2)) : Json(nullptr);
  return j;
}

Json to_json(const HeegnerConstants& h) {
  Json fs = Json::array();
  for (const auto& f : h.factors)
    fs.push_back({{"kind", f.kind}, {"q", num(f.prime)}, {"value", padic(f.value)}, {"flagged", f.flagged},
                  {"note", f.note}});
  return Json{{"label", h.label},
              {"factors", fs},
              {"product", padic(h.product)},
              {"normalized", padic(h.normalized)},
              {"alpha_asserted", h.alpha_asserted},
              {"cf_verified", h.cf_verified}};
}

Json to_json(const HeegnerComparison& c) {
  return Json{{"verdict", to_string(c.verdict)}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"reasons", strings(c.reasons)}};
}

Json to_json(const EisensteinVerdict& e) {
  Json checks = Json::array();
  for (const auto& c : e.checks) {
    Json h = c.holds ? Json(*c.holds ? "HOLDS" : "FAILS") : Json("UNKNOWN");
    checks.push_back({{"l", num(c.prime)}, {"family", to_string(c.family)}, {"expected", c.expected}, {"holds", h}});
  }
  return Json{{"holds", to_string(e.holds)}, {"bound", num(e.bound)}, {"checks", checks},
              {"witnesses", nums(e.witnesses)}};
}

Json to_json(const MuCertificate& c) {
  Json hs = Json::array();
  for (const auto& h : c.hypotheses) hs.push_back(to_json(h));
  Json descent = to_json(c.descent);
  descent.erase("checks");  // the per-prime table is long; witnesses suffice here
  return Json{{"side", to_string(c.side)},
              {"reference_curve", c.reference_curve},
              {"reference_form", c.reference_form},
              {"descent", descent},
              {"congruence", to_json(c.congruence)},
              {"hypotheses", hs},
              {"steps", strings(c.steps)},
              {"conclusion", c.conclusion}};
}

Json error_json(const std::string& code, const std::string& message) {
  return Json{{"error", {{"code", code}, {"message", message}}}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace {

std::string scalar(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "n/a";
  return j.dump();
}

bool flat(const Json& j) { return !j.is_object() && !(j.is_array() && !j.empty() && !j.front().is_primitive()); }

void render(const Json& j, const std::string& title, int depth, std::ostringstream& out) {
  out << std::string(static_cast<std::size_t>(std::min(depth, 6)), '#') << ' ' << title << "\n\n";
  if (j.is_object()) {
    bool any = false;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!flat(it.value())) continue;
      any = true;
      out << "- **" << it.key() << "**: ";
      if (it.value().is_array()) {
        std::string sep;
        for (const auto& x : it.value()) {
          out << sep << scalar(x);
          sep = ", ";
        }
        if (it.value().empty()) out << "(none)";
      } else {
        out << scalar(it.value());
      }
      out << '\n';
    }
    if (any) out << '\n';
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!flat(it.value())) render(it.value(), it.key(), depth + 1, out);
  } else if (j.is_array()) {
    int i = 1;
    for (const auto& x : j) render(x, title + " " + std::to_string(i++), depth + 1, out);
  } else {
    out << scalar(j) << "\n\n";
  }
}

}  // namespace

std::string markdown(const Json& j, const std::string& title) {
  std::ostringstream out;
  render(j, title, 1, out);
  return out.str();
}

}  // namespace iwasawa::report
