#include "iwasawa/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "iwasawa/error.hpp"
#include "report.hpp"

namespace iwasawa::cli {

namespace {

using report::Json;
using report::num;
namespace fs = std::filesystem;

constexpr int kDefaultPrecision = 12;
constexpr int kDefaultDegree = 64;

struct Outcome {
  Json body;
  int exit = kExitOk;
};

int exit_for(const std::string& status) {
  static const std::map<std::string, int> codes = {
      {"HOLDS", kExitOk},         {"PROPAGATED", kExitOk},     {"CONGRUENT", kExitOk},
      {"CERTIFIED", kExitOk},     {"OK", kExitOk},             {"FAILS", kExitFails},
      {"CONFLICT", kExitFails},   {"PARITY_VIOLATION", kExitFails}, {"NOT_CONGRUENT", kExitFails},
      {"UNKNOWN", kExitUnknown},
  };
  auto it = codes.find(status);
  return it == codes.end() ? kExitError : it->second;
}

Outcome with_status(Json body, const std::string& status) {
  body["status"] = status;
  return {std::move(body), exit_for(status)};
}

int default_precision() {
  const char* env = std::getenv("IWASAWA_PRECISION");
  if (!env || !*env) return kDefaultPrecision;
  char* end = nullptr;
  long m = std::strtol(env, &end, 10);
  if (*end != '\0' || m < 1 || m > 10000)
    throw Error(ErrorCode::kInvalidArgument, std::string("IWASAWA_PRECISION must be a positive integer, got '") + env + "'");
  return static_cast<int>(m);
}

// Everything a subcommand may read from the command line.
struct Options {
  std::string report = "json";
  std::optional<int> precision;
  int degree = kDefaultDegree;

  std::string form, f1, f2, reference;
  long twist = 1, twist1 = 1, twist2 = 1;
  long disc = 0, prime = 0, N = 0;
  std::string series, primes, strategy = "relaxed";
  std::string mode, side = "algebraic", decomposition;
  long lambda_in = 0, lambda_sel = 0, lambda_l = 0, chi = 1;
  bool reverse = false;
  bool assert_fg = false, assert_mu = false, assert_alpha = false, assert_eq = false, assert_incl = false;
  std::vector<std::string> overrides;
  long phi = 1, psi = 1, N1 = 1, N2 = 1, N0 = 1;
  int k = 1;
  std::string manifest;
  int threads = 0;

  int M() const { return precision ? *precision : default_precision(); }
};

EigenformRecord resolve_form(const std::string& spec, long twist_by) {
  if (spec.empty()) throw Error(ErrorCode::kInvalidArgument, "missing form argument");
  EigenformRecord f;
  if (spec.rfind("ref:", 0) == 0) {
    std::string label = spec.substr(4);
    f = reference_form(label, reference_form_limit(label));
  } else {
    f = load_form(spec);
  }
  return twist_by == 1 ? f : twist(f, twist_by);
}

std::vector<long> parse_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw Error(ErrorCode::kInvalidArgument, "not an integer: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

Json inputs_json(const Options& o, const QuadFieldContext& ctx) {
  return Json{{"disc", num(ctx.disc)},
              {"class_number", num(ctx.h)},
              {"prime", num(ctx.p)},
              {"precision", num(ctx.precision)},
              {"degree", num(o.degree)}};
}

LevelStrategy parse_strategy(const std::string& s) {
  if (s == "relaxed") return LevelStrategy::kRelaxed;
  if (s == "square") return LevelStrategy::kSquare;
  throw Error(ErrorCode::kInvalidArgument, "strategy must be relaxed or square");
}

// ---- subcommands ----

Outcome cmd_ingest(const Options& o) {
  auto f = resolve_form(o.form, o.twist);
  Json body{{"label", f.label},
            {"level", num(f.level)},
            {"weight", num(f.weight)},
            {"bound", num(f.bound())},
            {"provenance", f.provenance},
            {"warnings", f.warnings},
            {"sturm_bound", num(sturm_bound(f.level))}};
  if (f.embedding) body["embedding"] = to_string(*f.embedding);
  return with_status(body, "OK");
}

Outcome cmd_factor_level(const Options& o) {
  auto ctx = QuadFieldContext::make(o.disc, o.prime, o.M());
  auto fact = factor_level(o.N, ctx);
  auto g = check_GHH(fact);
  Json body = report::to_json(fact);
  body["GHH"] = {{"holds", g.holds}, {"reason", g.reason}};
  return with_status(body, "OK");
}

Outcome cmd_invariants(const Options& o) {
  Json arr = Json::parse(o.series);
  if (!arr.is_array() || arr.empty()) throw Error(ErrorCode::kInvalidArgument, "--series must be a nonempty JSON array");
  std::vector<mpz_class> cs;
  for (const auto& c : arr) {
    std::string s = c.is_string() ? c.get<std::string>() : c.dump();
    mpz_class z;
    if (z.set_str(s, 10) != 0) throw Error(ErrorCode::kInvalidArgument, "series coefficient '" + s + "' is not an integer");
    cs.push_back(z);
  }
  auto ring = LocalRing::make(o.prime);
  int M = o.M();
  auto F = IwasawaElement::from_integers(ring, cs, static_cast<int>(cs.size()) - 1, M);
  auto ml = mu_lambda(F);
  Json body = report::to_json(ml);
  body["prime"] = num(o.prime);
  body["precision"] = num(M);
  body["degree"] = num(F.degree());
  return with_status(body, ml.certain() ? "OK" : "UNKNOWN");
}

Outcome cmd_local_terms(const Options& o) {
  auto ctx = QuadFieldContext::make(o.disc, o.prime, o.M());
  auto f = resolve_form(o.form, o.twist);
  auto primes = parse_list(o.primes);
  auto s = sum_local_lambdas(f, primes, ctx, o.M(), o.degree);
  Json body = report::to_json(s);
  body["form"] = f.label;
  body["primes"] = report::nums(primes);
  body["inputs"] = inputs_json(o, ctx);
  return with_status(body, s.total ? "OK" : "UNKNOWN");
}

struct PairSetup {
  EigenformRecord f1, f2;
  QuadFieldContext ctx;
  HypothesisReport hyp;
  Assertions a;
};

PairSetup pair_setup(const Options& o) {
  PairSetup s{resolve_form(o.f1, o.twist1), resolve_form(o.f2, o.twist2),
              QuadFieldContext::make(o.disc, o.prime, o.M()), {}, {}};
  s.hyp = assess_pair(s.f1, s.f2, s.ctx, parse_strategy(o.strategy));
  s.a.fg = o.assert_fg;
  s.a.mu = o.assert_mu;
  s.a.alpha_unit = o.assert_alpha;
  s.a.imc_equality_f1 = o.assert_eq;
  s.a.imc_inclusion_f2 = o.assert_incl;
  s.a.overrides = o.overrides;
  s.hyp.fg = s.a.fg;
  s.hyp.mu = s.a.mu;
  s.hyp.alpha_unit = s.a.alpha_unit;
  return s;
}

Json pair_inputs(const Options& o, const PairSetup& s) {
  Json in = inputs_json(o, s.ctx);
  in["f1"] = s.f1.label;
  in["f2"] = s.f2.label;
  return in;
}

Outcome cmd_check(const Options& o) {
  auto s = pair_setup(o);
  Json body{{"inputs", pair_inputs(o, s)}, {"hypotheses", report::to_json(s.hyp)}};
  return with_status(body, to_string(s.hyp.overall()));
}

// Assertion flags a mode depends on; HYPOTHESIS_NOT_MET names the missing ones.
void require_asserted(const std::vector<std::pair<std::string, bool>>& flags) {
  std::string missing;
  for (const auto& [name, set] : flags)
    if (!set) missing += (missing.empty() ? "" : "; ") + name + " not asserted";
  if (!missing.empty()) throw Error(ErrorCode::kHypothesisNotMet, missing);
}

Json tables_json(const PairTables& t) {
  return Json{{"sigma0", report::nums(t.sigma0)},
              {"n3_f1", report::nums(t.n3_1)},
              {"n3_f2", report::nums(t.n3_2)},
              {"sigma0_terms_f1", report::to_json(t.sigma0_1)},
              {"sigma0_terms_f2", report::to_json(t.sigma0_2)},
              {"n3_terms_f1", report::to_json(t.n3_1_terms)},
              {"n3_terms_f2", report::to_json(t.n3_2_terms)}};
}

Outcome cmd_mu_cert(const Options& o) {
  auto ctx = QuadFieldContext::make(o.disc, o.prime, o.M());
  auto f = resolve_form(o.form.empty() ? o.f1 : o.form, o.twist);
  auto dec = parse_list(o.decomposition.empty() ? "1,1,1" : o.decomposition);
  if (dec.size() != 3) throw Error(ErrorCode::kInvalidArgument, "--decomposition takes N1,N2,N0");
  CertificateSide side;
  if (o.side == "algebraic")
    side = CertificateSide::kAlgebraic;
  else if (o.side == "analytic")
    side = CertificateSide::kAnalytic;
  else
    throw Error(ErrorCode::kInvalidArgument, "--side must be algebraic or analytic");
  std::optional<EigenformRecord> ref;
  if (!o.reference.empty()) ref = resolve_form(o.reference, 1);
  auto c = mu_certificate(f, o.chi, dec[0], dec[1], dec[2], ctx, side, ref);
  Json body{{"inputs", inputs_json(o, ctx)}, {"certificate", report::to_json(c)}};
  body["inputs"]["form"] = f.label;
  body["inputs"]["chi"] = num(o.chi);
  body["inputs"]["decomposition"] = report::nums(dec);
  return with_status(body, "CERTIFIED");
}

Outcome cmd_transfer(const Options& o) {
  if (o.mode == "mu-cert") return cmd_mu_cert(o);
  auto s = pair_setup(o);
  Json body{{"inputs", pair_inputs(o, s)}, {"mode", o.mode}, {"hypotheses", report::to_json(s.hyp)}};
  body["assertions"] = {{"fg", s.a.fg},
                        {"mu", s.a.mu},
                        {"alpha_unit", s.a.alpha_unit},
                        {"imc_equality_f1", s.a.imc_equality_f1},
                        {"imc_inclusion_f2", s.a.imc_inclusion_f2}};
  Json citations = Json::array();
  std::vector<std::string> used;

  if (o.mode == "heegner") {
    used = require(s.hyp, {"GHH", "Cong", "div", "sq-fr"}, s.a);
    auto h1 = heegner_constants(s.f1, s.hyp.cls1, s.ctx, s.a.alpha_unit, o.M());
    auto h2 = heegner_constants(s.f2, s.hyp.cls2, s.ctx, s.a.alpha_unit, o.M());
    auto cmp = compare_heegner(h1, h2);
    body["constants_f1"] = report::to_json(h1);
    body["constants_f2"] = report::to_json(h2);
    body["comparison"] = report::to_json(cmp);
    citations.push_back("congruence of Heegner-point constants for congruent forms: c(f) * prod_{q | M3} P_q(0)^2 * "
                        "(1 - b_p/p + 1/p)^2 agree mod pi; logarithms are not computed");
    body["overrides"] = used;
    body["citations"] = citations;
    return with_status(body, to_string(cmp.verdict));
  }

  const bool algebraic = o.mode == "algebraic", analytic = o.mode == "analytic", imc = o.mode == "imc";
  if (!algebraic && !analytic && !imc)
    throw Error(ErrorCode::kInvalidArgument, "--mode must be algebraic, analytic, imc, heegner or mu-cert");

  if (algebraic) {
    require_asserted({{"(FG)", s.a.fg}, {"(mu)", s.a.mu}});
    used = require(s.hyp, {"GHH", "Cong", "H0"}, s.a);
  } else if (analytic) {
    require_asserted({{"(mu)", s.a.mu}, {"alpha(f) unit", s.a.alpha_unit}});
    used = require(s.hyp, {"Cong", "div", "sq-fr", "unit"}, s.a);
  } else {
    require_asserted({{"(FG)", s.a.fg}, {"(mu)", s.a.mu}, {"alpha(f) unit", s.a.alpha_unit}});
    std::vector<std::string> all;
    for (const auto& h : s.hyp.verdicts) all.push_back(h.name);
    used = require(s.hyp, all, s.a);
  }
  body["overrides"] = used;

  auto t = local_tables(s.f1, s.f2, s.ctx, s.hyp, o.M(), o.degree);
  body["local_terms"] = tables_json(t);
  std::string status = "HOLDS";
  if (algebraic) {
    const LocalSum& from = o.reverse ? t.sigma0_2 : t.sigma0_1;
    const LocalSum& to = o.reverse ? t.sigma0_1 : t.sigma0_2;
    body["result"] = report::to_json(transfer_algebraic(o.lambda_in, from, to));
    body["direction"] = o.reverse ? "f2 -> f1" : "f1 -> f2";
    citations.push_back("equality of Selmer lambda-invariants for congruent forms, corrected by the local terms over "
                        "Sigma_0 = primes of N1+ N2+");
  } else if (analytic) {
    const LocalSum& from = o.reverse ? t.n3_2_terms : t.n3_1_terms;
    const LocalSum& to = o.reverse ? t.n3_1_terms : t.n3_2_terms;
    body["result"] = report::to_json(transfer_analytic(o.lambda_in, from, to));
    body["direction"] = o.reverse ? "f2 -> f1" : "f1 -> f2";
    citations.push_back("analytic lambda transfer: 2 lambda(L_p(f1)) + sum over N3~(1) = 2 lambda(L_p(f2)) + sum "
                        "over N3~(2), at the common level");
  } else {
    ImcInput in{o.lambda_sel, o.lambda_l, s.a.imc_equality_f1, s.a.imc_inclusion_f2};
    auto v = imc_propagate(in, t);
    body["result"] = report::to_json(v);
    citations.push_back("main-conjecture propagation: the full equality for f1 and one divisibility for f2 give "
                        "the equality for f2 once lambda(Sel_2) = 2 lambda(L_2)");
    status = to_string(v.status);
  }
  body["citations"] = citations;
  return with_status(body, status);
}

Outcome cmd_twist(const Options& o) {
  auto f = resolve_form(o.form, o.twist);
  auto g = twist(f, o.chi);
  Json body = Json::parse(to_json(g));
  return with_status(Json{{"form", body}}, "OK");
}

Outcome cmd_congruent(const Options& o) {
  auto f1 = resolve_form(o.f1, o.twist1), f2 = resolve_form(o.f2, o.twist2);
  auto ring = LocalRing::make(o.prime);
  long N = o.N ? o.N : std::lcm(f1.level, f2.level);
  auto c = check_congruence(f1, f2, ring, o.k, N);
  Json body{{"f1", f1.label}, {"f2", f2.label}, {"level", num(N)}, {"congruence", report::to_json(c)}};
  return with_status(body, to_string(c.holds));
}

Outcome cmd_eisenstein(const Options& o) {
  auto f = resolve_form(o.form, o.twist);
  auto ring = LocalRing::make(o.prime);
  auto e = check_partial_eisenstein(f, o.phi, o.psi, o.N1, o.N2, o.N0, ring, o.k);
  Json body{{"form", f.label}, {"descent", report::to_json(e)}};
  return with_status(body, to_string(e.holds));
}

Outcome error_outcome(const std::string& code, const std::string& message) {
  return {report::error_json(code, message), kExitError};
}

// Translates exceptions into error reports; `run` may throw anything.
template <class F>
Outcome guarded(F&& run) {
  try {
    return run();
  } catch (const Error& e) {
    std::string what = e.what();
    std::string prefix = std::string(to_string(e.code())) + ": ";
    return error_outcome(std::string(to_string(e.code())),
                         what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what);
  } catch (const nlohmann::json::exception& e) {
    return error_outcome("SCHEMA_ERROR", e.what());
  } catch (const std::exception& e) {
    return error_outcome("INTERNAL", e.what());
  }
}

struct Parsed {
  Options opts;
  std::string command;
  int exit = -1;  // set when parsing already decided the outcome (help, usage error)
};

Parsed parse(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

Outcome dispatch(const Parsed& p);

// ---- batch ----

// Row keys that name files, resolved against the manifest directory.
bool is_path_key(const std::string& key) { return key == "f1" || key == "f2" || key == "form" || key == "reference"; }

std::vector<std::string> row_args(const Json& row, const fs::path& base) {
  if (!row.is_object()) throw Error(ErrorCode::kSchemaError, "manifest row is not an object");
  std::string command = row.contains("command") ? row["command"].get<std::string>()
                                                : (row.contains("mode") ? "transfer" : "check");
  if (command == "batch") throw Error(ErrorCode::kSchemaError, "nested batch rows are not allowed");
  std::vector<std::string> args{command};
  for (auto it = row.begin(); it != row.end(); ++it) {
    const std::string& key = it.key();
    if (key == "command" || key == "id") continue;
    const Json& v = it.value();
    if (key == "assert") {
      if (!v.is_array()) throw Error(ErrorCode::kSchemaError, "'assert' must be an array");
      for (const auto& a : v) args.push_back("--assert-" + a.get<std::string>());
      continue;
    }
    if (key == "override") {
      if (!v.is_array()) throw Error(ErrorCode::kSchemaError, "'override' must be an array");
      for (const auto& a : v) {
        args.push_back("--override");
        args.push_back(a.get<std::string>());
      }
      continue;
    }
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back(flag);
      continue;
    }
    std::string value = v.is_string() ? v.get<std::string>() : v.dump();
    if (is_path_key(key) && value.rfind("ref:", 0) != 0 && fs::path(value).is_relative())
      value = (base / value).lexically_normal().string();
    args.push_back(flag);
    args.push_back(value);
  }
  return args;
}

Outcome cmd_batch(const Options& o) {
  std::ifstream in(o.manifest);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot read manifest " + o.manifest);
  Json rows = Json::parse(in);
  if (!rows.is_array()) throw Error(ErrorCode::kSchemaError, "manifest must be a JSON array of row objects");
  const fs::path base = fs::path(o.manifest).parent_path();
  const std::size_t n = rows.size();
  std::vector<Outcome> results(n);

  auto run_row = [&](std::size_t i) {
    results[i] = guarded([&] {
      auto args = row_args(rows[i], base);
      std::ostringstream sink_out, sink_err;
      Parsed p = parse(args, sink_out, sink_err);
      if (p.exit >= 0) {
        std::string msg = sink_err.str();
        msg = msg.substr(0, msg.find('\n'));
        return error_outcome("USAGE", msg);
      }
      // rows inherit the batch precision unless they set their own
      if (!p.opts.precision) p.opts.precision = o.precision;
      return dispatch(p);
    });
  };

  unsigned threads = o.threads > 0 ? static_cast<unsigned>(o.threads) : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) run_row(i);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // single-threaded assembly: row order is manifest order
  Json out_rows = Json::array();
  std::map<std::string, long> counts;
  long errors = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = results[i];
    Json row{{"row", num(static_cast<long>(i))}, {"exit", num(r.exit)}};
    if (rows[i].is_object() && rows[i].contains("id")) row["id"] = rows[i]["id"];
    if (r.body.contains("error")) {
      ++errors;
      row["error"] = r.body["error"];
      ++counts["ERROR"];
    } else {
      row["report"] = r.body;
      ++counts[r.body.value("status", std::string("OK"))];
    }
    out_rows.push_back(std::move(row));
  }
  Json by_status = Json::object();
  for (const auto& [k, v] : counts) by_status[k] = num(v);
  Json body{{"rows", out_rows},
            {"summary", {{"rows", num(static_cast<long>(n))}, {"errors", num(errors)}, {"by_status", by_status}}}};
  return {body, kExitOk};
}

Outcome dispatch(const Parsed& p) {
  return guarded([&]() -> Outcome {
    const auto& o = p.opts;
    const auto& c = p.command;
    if (c == "ingest") return cmd_ingest(o);
    if (c == "factor-level") return cmd_factor_level(o);
    if (c == "invariants") return cmd_invariants(o);
    if (c == "local-terms") return cmd_local_terms(o);
    if (c == "check") return cmd_check(o);
    if (c == "transfer") return cmd_transfer(o);
    if (c == "batch") return cmd_batch(o);
    if (c == "twist") return cmd_twist(o);
    if (c == "congruent") return cmd_congruent(o);
    if (c == "eisenstein") return cmd_eisenstein(o);
    throw Error(ErrorCode::kInvalidArgument, "unknown subcommand " + c);
  });
}

Parsed parse(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Parsed p;
  Options& o = p.opts;
  CLI::App app{"Anticyclotomic lambda/mu transfer checks for congruent eigenforms", "iwasawa"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--report", o.report, "output format")->check(CLI::IsMember({"json", "md"}));
  app.add_option("--precision", o.precision, "coefficient precision M (default $IWASAWA_PRECISION or 12)")
      ->check(CLI::Range(1, 10000));
  app.add_option("--degree", o.degree, "truncation degree D for local terms")->check(CLI::Range(1, 100000));

  auto field = [&](CLI::App* s) {
    s->add_option("--disc", o.disc, "fundamental discriminant of K")->required();
    s->add_option("--prime", o.prime, "the prime p")->required();
  };
  auto one_form = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--form", o.form, "form file, or ref:11a / ref:19a");
    if (required) opt->required();
    s->add_option("--twist", o.twist, "twist the form by this fundamental discriminant first");
  };
  auto two_forms = [&](CLI::App* s) {
    s->add_option("--f1", o.f1, "first form")->required();
    s->add_option("--f2", o.f2, "second form")->required();
    s->add_option("--twist1", o.twist1, "twist f1 by this discriminant");
    s->add_option("--twist2", o.twist2, "twist f2 by this discriminant");
  };

  auto* ingest = app.add_subcommand("ingest", "validate a form file");
  one_form(ingest, true);

  auto* fl = app.add_subcommand("factor-level", "split N into N+ N-");
  fl->add_option("--N", o.N, "level")->required();
  field(fl);

  auto* inv = app.add_subcommand("invariants", "mu and lambda of a power series");
  inv->add_option("--series", o.series, "coefficients c0,c1,... as a JSON array")->required();
  inv->add_option("--prime", o.prime, "the prime p")->required();

  auto* lt = app.add_subcommand("local-terms", "local terms at the primes above q1,q2,...");
  one_form(lt, true);
  field(lt);
  lt->add_option("--primes", o.primes, "comma-separated rational primes")->required();

  auto* check = app.add_subcommand("check", "hypothesis verdicts for a pair");
  two_forms(check);
  field(check);
  check->add_option("--strategy", o.strategy, "common level strategy")->check(CLI::IsMember({"relaxed", "square"}));

  auto* tr = app.add_subcommand("transfer", "lambda transfers, main-conjecture propagation, Heegner constants, mu certificates");
  tr->add_option("--mode", o.mode, "transfer mode")
      ->required()
      ->check(CLI::IsMember({"algebraic", "analytic", "imc", "heegner", "mu-cert"}));
  tr->add_option("--f1", o.f1, "first form");
  tr->add_option("--f2", o.f2, "second form");
  tr->add_option("--twist1", o.twist1, "twist f1 by this discriminant");
  tr->add_option("--twist2", o.twist2, "twist f2 by this discriminant");
  one_form(tr, false);
  field(tr);
  tr->add_option("--strategy", o.strategy, "common level strategy")->check(CLI::IsMember({"relaxed", "square"}));
  tr->add_option("--lambda-in", o.lambda_in, "lambda of the source invariant")->check(CLI::NonNegativeNumber);
  tr->add_option("--lambda-sel", o.lambda_sel, "lambda of the dual Selmer group of f1")->check(CLI::NonNegativeNumber);
  tr->add_option("--lambda-l", o.lambda_l, "lambda of the p-adic L-function of f1")->check(CLI::NonNegativeNumber);
  tr->add_flag("--reverse", o.reverse, "transfer from f2 to f1");
  tr->add_flag("--assert-fg", o.assert_fg, "dual Selmer group of f1 finitely generated over O_v");
  tr->add_flag("--assert-mu", o.assert_mu, "mu = 0 for f1");
  tr->add_flag("--assert-alpha-unit", o.assert_alpha, "alpha(f1) is a p-adic unit");
  tr->add_flag("--assert-imc-equality-f1", o.assert_eq, "the main conjecture holds for f1");
  tr->add_flag("--assert-imc-inclusion-f2", o.assert_incl, "one divisibility of the main conjecture for f2");
  tr->add_option("--override", o.overrides, "accept this hypothesis whatever its verdict (recorded)");
  tr->add_option("--chi", o.chi, "quadratic character (fundamental discriminant), mu-cert");
  tr->add_option("--decomposition", o.decomposition, "N1,N2,N0 of the Eisenstein descent, mu-cert");
  tr->add_option("--side", o.side, "mu-cert side")->check(CLI::IsMember({"algebraic", "analytic"}));
  tr->add_option("--reference", o.reference, "untwisted reference form for mu-cert");

  auto* batch = app.add_subcommand("batch", "run a manifest of rows");
  batch->add_option("--manifest", o.manifest, "JSON array of row objects")->required();
  batch->add_option("--threads", o.threads, "worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);

  auto* tw = app.add_subcommand("twist", "quadratic twist of a form");
  one_form(tw, true);
  tw->add_option("--chi", o.chi, "fundamental discriminant")->required();

  auto* cg = app.add_subcommand("congruent", "coefficient congruence up to the Sturm bound");
  two_forms(cg);
  cg->add_option("--prime", o.prime, "the prime p")->required();
  cg->add_option("--N", o.N, "level (default lcm of the two levels)");
  cg->add_option("--k", o.k, "congruence modulo pi^k")->check(CLI::PositiveNumber);

  auto* es = app.add_subcommand("eisenstein", "partial Eisenstein descent check");
  one_form(es, true);
  es->add_option("--prime", o.prime, "the prime p")->required();
  es->add_option("--phi", o.phi, "character phi as a fundamental discriminant");
  es->add_option("--psi", o.psi, "character psi as a fundamental discriminant");
  es->add_option("--N1", o.N1);
  es->add_option("--N2", o.N2);
  es->add_option("--N0", o.N0);
  es->add_option("--k", o.k, "congruence modulo pi^k")->check(CLI::PositiveNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    p.exit = app.exit(e, out, err);
    return p;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    p.exit = kExitError;
    return p;
  }
  p.command = app.get_subcommands().front()->get_name();
  return p;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Parsed p = parse(args, out, err);
  if (p.exit >= 0) return p.exit == 0 ? kExitOk : kExitError;
  Outcome r = dispatch(p);
  if (r.body.contains("error")) err << "error: " << r.body["error"]["code"].get<std::string>() << ": "
                                    << r.body["error"]["message"].get<std::string>() << '\n';
  if (p.opts.report == "md")
    out << report::markdown(r.body, "iwasawa " + p.command);
  else
    out << report::dump(r.body);
  return r.exit;
}

}  // namespace iwasawa::cli
