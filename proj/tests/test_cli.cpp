#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "quatlat/error.hpp"
#include "quatlat/expr.hpp"
#include "quatlat/scenario.hpp"

using namespace quatlat;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(QUATLAT_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

ExprContext ctx(unsigned n) { return ExprContext{SymbolAlgebra::standard(n), std::nullopt, {}}; }

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

}  // namespace

TEST(Expr, PrintParseRoundTrip) {
  for (unsigned n : {1u, 8u, 56u}) {
    const ExprContext cx = ctx(n);
    for (const std::string s :
         {"(1-i-j-k)/2", "c^3 - 1/2*c*i + k", "-7/3", "(1/2)*(c^2 + 1) + (1/2)*c*j", "i*j*k", "c^-1*i"}) {
      const Quaternion x = parse_element(s, cx);
      EXPECT_EQ(parse_element(x.to_string(), cx), x) << s << " at n=" << n;
    }
  }
}

TEST(Expr, Values) {
  const ExprContext cx = ctx(1);
  EXPECT_TRUE(parse_element("i*j − k", cx).is_zero());
  EXPECT_EQ(parse_element("i^-1", cx), parse_element("-i", cx));
  EXPECT_EQ(parse_element("2^3*i", cx), parse_element("8*i", cx));
  EXPECT_EQ(parse_element_list("i, (1+j)/2, k", cx).size(), 3u);
  EXPECT_EQ(parse_scalar("sqrt2^2", ctx(8)), FieldElem(RealCycloField::get(8), 2));
  EXPECT_THROW(parse_scalar("i", cx), Error);
  ExprContext named = cx;
  named.names.emplace("w", parse_element("(1-i-j-k)/2", cx));
  EXPECT_EQ(parse_element("w^6", named), parse_element("1", cx));
}

TEST(Expr, Errors) {
  const ExprContext cx = ctx(8);
  try {
    parse_element("1 + sqrt5", cx);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownSymbol);
    EXPECT_EQ(e.begin(), 4u);
    EXPECT_EQ(e.end(), 9u);
  }
  try {
    parse_element("(i + j", cx);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SyntaxError);
  }
  try {
    parse_element("i/(c^2 - 2)", cx);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DivisionByZero);
  }
  try {
    parse_element("d + 1", cx);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownSymbol);
    EXPECT_EQ(e.begin(), 0u);
  }
  const auto parts = split_top_level("i, (j, k), c");
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[1], " (j, k)");
}

TEST(Scenario, EmptyPasses) {
  const Scenario sc = parse_scenario("scenario empty\nn 1\n");
  const Report r = run_scenario(sc);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.expectations(), 0u);
}

TEST(Scenario, Schema) {
  EXPECT_THROW(parse_scenario("n 5\n"), Error);
  EXPECT_THROW(parse_scenario("scenario x\n"), Error);
  EXPECT_THROW(parse_scenario("scenario x\nn 5\nnote hi\nn 6\n"), Error);
  EXPECT_THROW(parse_scenario("scenario x\nn 5\nbogus line\n"), Error);
  EXPECT_THROW(parse_scenario("scenario x\ntier fast\nn 5\n"), Error);
}

TEST(Scenario, FailuresAreReported) {
  const Scenario sc = parse_scenario(
      "scenario f\nn 1\n"
      "step let L = closure i, j\n"
      "expect L maximal = false\n"
      "step let G = normone L\n"
      "expect G size = 9\n"
      "step let X = closure i/2, j\n"
      "observe G tag\n");
  const Report r = run_scenario(sc);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.failures(), 2u);  // one expectation, one step
  ASSERT_EQ(r.entries.size(), 6u);
  EXPECT_EQ(r.entries[1].value, "false");
  EXPECT_FALSE(r.entries[4].error.empty());
  EXPECT_FALSE(r.entries[3].ok);
  EXPECT_EQ(r.entries[5].value, "GeneralizedQuaternion(8)");
}

TEST(Scenario, DeterministicRendering) {
  const Scenario sc = load_scenario(std::string(QUATLAT_SCENARIO_DIR) + "/n01_hurwitz.scn");
  RunOptions opt;
  opt.timing = false;
  const Report a = run_scenario(sc, opt), b = run_scenario(sc, opt);
  EXPECT_TRUE(a.passed());
  EXPECT_EQ(render_text(a, opt), render_text(b, opt));
  EXPECT_EQ(render_json(a, opt), render_json(b, opt));
  const auto j = nlohmann::json::parse(render_json(a, opt));
  EXPECT_EQ(j["scenario"], sc.name);
  EXPECT_FALSE(j.contains("time_ms"));
}

TEST(Cli, FieldInfo) {
  const CliRun r = run_cli("field info --n 5 --json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["degree"], 2);
}

TEST(Cli, BuildIdentify) {
  const std::string path = temp_path("lip.order");
  ASSERT_EQ(run_cli("order build --n 1 --gens 'i, j' -o " + path).code, 0);
  const CliRun g = run_cli("order normone " + path + " --json");
  ASSERT_EQ(g.code, 0);
  EXPECT_EQ(nlohmann::json::parse(g.out)["size"], 8);
  const std::string hpath = temp_path("hur.order");
  ASSERT_EQ(run_cli("order adjoin " + path + " --elem '(1-i-j-k)/2' -o " + hpath).code, 0);
  const CliRun id = run_cli("order identify " + hpath);
  EXPECT_EQ(id.code, 0);
  EXPECT_NE(id.out.find("SL23"), std::string::npos);
  const CliRun m = run_cli("order maximize " + path);
  EXPECT_EQ(m.code, 0);
  EXPECT_NE(m.out.find("quatlat-order v1"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("field info").code, 2);
  EXPECT_EQ(run_cli("order build --n 8 --gens 'i, sqrt5'").code, 2);
  EXPECT_EQ(run_cli("order build --n 1 --gens 'i/2, j'").code, 1);
  EXPECT_EQ(run_cli("order info /nonexistent/file").code, 2);
  const CliRun e = run_cli("algebra ram --n 8 -a '(c' --json");
  EXPECT_EQ(e.code, 2);
  const auto j = nlohmann::json::parse(e.out);
  EXPECT_EQ(j["error"]["kind"], "SyntaxError");
  EXPECT_EQ(j["error"]["span"], nlohmann::json::array({2, 2}));

  const std::string bad = temp_path("bad.scn");
  std::ofstream(bad) << "scenario bad\nn 1\nstep let L = closure i, j\nexpect L size = 9\n";
  EXPECT_EQ(run_cli("scenario run " + bad).code, 1);
  const std::string broken = temp_path("broken.scn");
  std::ofstream(broken) << "n 1\n";
  EXPECT_EQ(run_cli("scenario run " + broken).code, 2);
}

TEST(Cli, ScenarioReportsAreStable) {
  const std::string s = std::string(QUATLAT_SCENARIO_DIR) + "/n01_hurwitz.scn";
  const CliRun a = run_cli("scenario run " + s + " --no-timing --json");
  const CliRun b = run_cli("--threads 1 scenario run " + s + " --no-timing --json");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}
