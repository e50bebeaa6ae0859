#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "iwasawa/cli.hpp"

using nlohmann::json;
using iwasawa::cli::run_command;

namespace {

struct Run {
  int code;
  std::string out, err;
  json body() const { return json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string form(const std::string& label) { return std::string(IWASAWA_TEST_DATA) + "/forms/" + label + ".json"; }

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("iwasawa_cli_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::vector<std::string> pair_args(const std::string& cmd) {
  return {cmd, "--f1", form("11a"), "--twist1", "-3", "--f2", form("38b"), "--twist2", "-3", "--disc", "-431", "--prime", "5"};
}

}  // namespace

TEST(Cli, FactorLevel) {
  auto r = run({"factor-level", "--N", "11", "--disc", "-7", "--prime", "23"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.body()["N_plus"], "11");
  EXPECT_EQ(r.body()["N_minus"], "1");
  // p | N violates the standing coprimality assumption
  auto bad = run({"factor-level", "--N", "11", "--disc", "-7", "--prime", "11"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.body()["error"]["code"], "NOT_COPRIME");
}

TEST(Cli, Invariants) {
  auto r = run({"invariants", "--series", "[5,5,1]", "--prime", "5"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.body()["mu"], "0");
  EXPECT_EQ(r.body()["lambda"], "2");
  auto strings = run({"invariants", "--series", "[\"25\",\"5\"]", "--prime", "5"});
  EXPECT_EQ(strings.body()["mu"], "1");
  EXPECT_EQ(strings.body()["lambda"], "1");
  EXPECT_EQ(run({"invariants", "--series", "[0,0]", "--prime", "5"}).code, 1);  // ALL_ZERO
  EXPECT_EQ(run({"invariants", "--series", "[1,x]", "--prime", "5"}).code, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"factor-level", "--N", "11"}).code, 1);
  EXPECT_EQ(run({"transfer", "--mode", "sideways", "--disc", "-431", "--prime", "5"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ExitCodesFollowVerdicts) {
  EXPECT_EQ(run(pair_args("check")).code, 0);
  // 11a and 19a are not congruent modulo 5
  auto fails = run({"check", "--f1", form("11a"), "--f2", form("19a"), "--disc", "-431", "--prime", "5"});
  EXPECT_EQ(fails.code, 2);
  EXPECT_EQ(fails.body()["status"], "FAILS");
  // untwisted pair: (H0) at p cannot be certified
  auto unknown = run({"check", "--f1", form("11a"), "--f2", form("38b"), "--disc", "-151", "--prime", "5"});
  EXPECT_EQ(unknown.code, 3);

  auto imc = pair_args("transfer");
  for (std::string s : {"--mode", "imc", "--lambda-sel", "4", "--lambda-l", "2", "--assert-fg", "--assert-mu",
                        "--assert-alpha-unit", "--assert-imc-equality-f1", "--assert-imc-inclusion-f2"})
    imc.push_back(s);
  auto ok = run(imc);
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.body()["result"]["lambda_sel_2"], "4");
  imc[imc.size() - 8] = "5";  // lambda-sel 5 != 2 * 2
  auto conflict = run(imc);
  EXPECT_EQ(conflict.code, 2);
  EXPECT_EQ(conflict.body()["status"], "CONFLICT");
}

TEST(Cli, TransferNeedsAssertions) {
  auto a = pair_args("transfer");
  for (std::string s : {"--mode", "algebraic", "--lambda-in", "3"}) a.push_back(s);
  auto r = run(a);
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.body()["error"]["code"], "HYPOTHESIS_NOT_MET");
  a.push_back("--assert-fg");
  a.push_back("--assert-mu");
  auto ok = run(a);
  ASSERT_EQ(ok.code, 0) << ok.out;
  EXPECT_EQ(ok.body()["result"]["value"], "3");
  EXPECT_EQ(ok.body()["local_terms"]["sigma0"], json({"2", "3", "11", "19"}));
}

TEST(Cli, OverrideIsRecorded) {
  // (H0) is UNKNOWN for the untwisted pair; an override lets the transfer run
  auto a = std::vector<std::string>{"transfer", "--mode", "algebraic", "--f1", form("11a"), "--f2", form("38b"),
                                    "--disc", "-151", "--prime", "5", "--lambda-in", "2", "--assert-fg",
                                    "--assert-mu"};
  EXPECT_EQ(run(a).code, 1);
  a.push_back("--override");
  a.push_back("H0");
  auto r = run(a);
  ASSERT_EQ(r.code, 0) << r.out;
  ASSERT_FALSE(r.body()["overrides"].empty());
  EXPECT_NE(r.body()["overrides"][0].get<std::string>().find("override: H0"), std::string::npos);
}

TEST(Cli, MuCertificate) {
  auto r = run({"transfer", "--mode", "mu-cert", "--form", form("38b"), "--twist", "-3", "--chi", "-3",
                "--decomposition", "2,19,9", "--disc", "-431", "--prime", "5"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.body()["certificate"]["reference_curve"], "11a.2");
  auto refused = run({"transfer", "--mode", "mu-cert", "--form", form("38b"), "--twist", "-3", "--chi", "-3",
                      "--decomposition", "2,19,9", "--disc", "-431", "--prime", "7"});
  EXPECT_EQ(refused.code, 1);
}

TEST(Cli, LocalTermsTable) {
  auto r = run({"local-terms", "--form", form("11a"), "--twist", "-3", "--disc", "-431", "--prime", "5", "--primes",
                "2,19"});
  ASSERT_EQ(r.code, 0) << r.out;
  auto b = r.body();
  ASSERT_EQ(b["terms"].size(), 4u);
  for (const auto& t : b["terms"])
    for (const char* key : {"q", "class", "u_valuation", "mu", "lambda", "certainty"}) EXPECT_TRUE(t.contains(key));
  EXPECT_EQ(b["total"], "2");
}

TEST(Cli, OutputIsDeterministicAndStringly) {
  auto a = run(pair_args("check")), b = run(pair_args("check"));
  EXPECT_EQ(a.out, b.out);
  // every scalar number goes out as a string
  std::function<void(const json&)> walk = [&](const json& j) {
    EXPECT_FALSE(j.is_number()) << j;
    if (j.is_structured())
      for (const auto& x : j) walk(x);
  };
  walk(a.body());
}

TEST(Cli, MarkdownReport) {
  auto args = pair_args("check");
  args.push_back("--report");
  args.push_back("md");
  auto r = run(args);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("# iwasawa check", 0), 0u);
  EXPECT_NE(r.out.find("- **status**: HOLDS"), std::string::npos);
}

TEST(Cli, PrecisionFromEnvironment) {
  setenv("IWASAWA_PRECISION", "7", 1);
  auto r = run({"invariants", "--series", "[5,5,1]", "--prime", "5"});
  EXPECT_EQ(r.body()["precision"], "7");
  auto flag = run({"invariants", "--series", "[5,5,1]", "--prime", "5", "--precision", "9"});
  EXPECT_EQ(flag.body()["precision"], "9");
  setenv("IWASAWA_PRECISION", "lots", 1);
  EXPECT_EQ(run({"invariants", "--series", "[5,5,1]", "--prime", "5"}).code, 1);
  unsetenv("IWASAWA_PRECISION");
}

TEST(Batch, EmptyManifest) {
  auto path = write_temp("empty.json", "[]");
  auto r = run({"batch", "--manifest", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.body()["rows"].empty());
  EXPECT_EQ(r.body()["summary"]["rows"], "0");
}

TEST(Batch, OneValidRow) {
  json rows = json::array({{{"f1", form("11a")},
                            {"twist1", "-3"},
                            {"f2", form("38b")},
                            {"twist2", "-3"},
                            {"disc", "-431"},
                            {"prime", "5"}}});
  auto r = run({"batch", "--manifest", write_temp("one.json", rows.dump())});
  ASSERT_EQ(r.code, 0);
  auto b = r.body();
  ASSERT_EQ(b["rows"].size(), 1u);
  EXPECT_EQ(b["rows"][0]["report"]["status"], "HOLDS");
  EXPECT_EQ(b["summary"]["by_status"]["HOLDS"], "1");
}

TEST(Batch, MalformedRowIsIsolated) {
  json good = {{"command", "invariants"}, {"series", "[5,5,1]"}, {"prime", "5"}};
  json rows = json::array({good, {{"command", "invariants"}, {"prime", "5"}}, "not an object", good});
  auto r = run({"batch", "--manifest", write_temp("mixed.json", rows.dump()), "--threads", "3"});
  ASSERT_EQ(r.code, 0);
  auto b = r.body();
  ASSERT_EQ(b["rows"].size(), 4u);
  EXPECT_EQ(b["rows"][0]["report"]["lambda"], "2");
  EXPECT_EQ(b["rows"][1]["error"]["code"], "USAGE");
  EXPECT_EQ(b["rows"][2]["error"]["code"], "SCHEMA_ERROR");
  EXPECT_EQ(b["rows"][3]["report"]["lambda"], "2");
  EXPECT_EQ(b["summary"]["errors"], "2");
}

TEST(Batch, RelativePathsAndUnreadableManifest) {
  auto dir = std::filesystem::temp_directory_path() / "iwasawa_cli_rel";
  std::filesystem::create_directories(dir / "forms");
  std::filesystem::copy_file(form("11a"), dir / "forms" / "11a.json", std::filesystem::copy_options::overwrite_existing);
  json rows = json::array({{{"command", "ingest"}, {"form", "forms/11a.json"}}});
  std::ofstream(dir / "m.json") << rows.dump();
  auto r = run({"batch", "--manifest", (dir / "m.json").string()});
  EXPECT_EQ(r.body()["rows"][0]["report"]["label"], "11a");
  EXPECT_EQ(run({"batch", "--manifest", (dir / "missing.json").string()}).code, 1);
}
