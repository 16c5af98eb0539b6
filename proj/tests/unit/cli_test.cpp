#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chase/parse.hpp"
#include "cli.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace chase;
namespace fx = chase::fixtures;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("chasewb_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

const std::string bicycle_rules = fx::data_path("bicycle.rls");
const std::string bicycle_facts = fx::data_path("bicycle.fct");
const std::string brake_rules = fx::data_path("brake.rls");
const std::string brake_facts = fx::data_path("brake.fct");

}  // namespace

TEST(Cli, RunPrintsStatusAndFacts) {
  auto r = invoke({"chase", "run", "--rules", bicycle_rules, "--facts", bicycle_facts});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("status: saturated"), std::string::npos);
  EXPECT_NE(r.out.find("length: 3"), std::string::npos);
  EXPECT_NE(r.out.find("IsPartOf(_:n0_0,b) ."), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"chase"}).code, 2);
  EXPECT_EQ(invoke({"chase", "run", "--rules", bicycle_rules}).code, 2);
  EXPECT_EQ(invoke({"chase", "run", "--rules", bicycle_rules, "--facts", bicycle_facts, "--strategy", "sideways"}).code, 2);
  EXPECT_EQ(invoke({"chase", "run", "--rules", "/nonexistent/x.rls", "--facts", bicycle_facts}).code, 2);
  EXPECT_EQ(invoke({"chase", "run", "--rules", bicycle_rules, "--facts", bicycle_facts, "--strategy", "script"}).code, 2);
  EXPECT_EQ(invoke({"bogus"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(TempDir, DomainErrorsExitOne) {
  auto bad = write("bad.rls", "r: P(x) -> .");
  auto r = invoke({"chase", "run", "--rules", bad, "--facts", bicycle_facts});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
  auto script = write("s.txt", "wheel x=b\n");
  EXPECT_EQ(invoke({"chase", "run", "--rules", bicycle_rules, "--facts", bicycle_facts, "--strategy", "script", "--script", script})
                .code,
            1);
  EXPECT_EQ(invoke({"chase", "decide-bf", "--rules", bicycle_rules, "--facts", bicycle_facts, "--max-rounds", "6"}).code, 0);
}

TEST_F(TempDir, ScriptThenFifoWritesTraceAndDot) {
  auto script = write("brake.txt", cli::print_script(fx::brake_script(2)));
  auto r = invoke({"chase", "run", "--rules", brake_rules, "--facts", brake_facts, "--strategy", "script", "--script", script,
                "--then", "fifo", "--trace", path("t.jsonl"), "--dot", path("f.dot"), "-o", path("out.fct")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("t.jsonl")));
  EXPECT_TRUE(fs::exists(path("f.dot")));
  EXPECT_TRUE(oracle::brute_isomorphic(parse_facts(fx::slurp(path("out.fct")), true), fx::brake_expected(2)));
}

TEST(Cli, ScriptFilesRoundTrip) {
  auto s = cli::parse_script("% comment\ngrow x=c y=b\n\nbrake x=b\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].rule_id, "grow");
  EXPECT_EQ(s[0].bindings.at("x"), Term::constant("c"));
  EXPECT_EQ(cli::parse_script(cli::print_script(s)), s);
  EXPECT_THROW(cli::parse_script("grow x\n"), Error);
}

TEST(Cli, DecideAndExplore) {
  auto r = invoke({"chase", "decide-bf", "--rules", brake_rules, "--facts", brake_facts});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("accepted at round 5"), std::string::npos) << r.out;
  auto j = invoke({"chase", "decide-bf", "--rules", brake_rules, "--facts", brake_facts, "--json"});
  EXPECT_EQ(nlohmann::json::parse(j.out)["round"], 5);
  auto e = invoke({"chase", "explore", "--rules", bicycle_rules, "--facts", bicycle_facts, "--depth", "3"});
  EXPECT_EQ(e.code, 0);
  EXPECT_EQ(nlohmann::json::parse(e.out)["depth_bound"], 3);
}

TEST(Cli, DaggerExitReflectsTheFinding) {
  EXPECT_EQ(invoke({"check", "dagger", "--rules", bicycle_rules, "--facts", bicycle_facts}).code, 0);
  EXPECT_EQ(invoke({"check", "dagger", "--rules", bicycle_rules, "--facts", bicycle_facts, "--strategy", "dfs", "--max-steps", "12"})
                .code,
            1);
}

TEST_F(TempDir, MachineCommands) {
  auto m = fx::data_path("bounce.tm");
  auto c = invoke({"tm", "compile", "--machine", m, "-o", path("m.rls")});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(parse_rules(fx::slurp(path("m.rls"))).size(), 21u);
  auto e = invoke({"tm", "encode", "--machine", m, "--tape", "1B", "--pos", "1", "-o", path("m.fct")});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(parse_facts(fx::slurp(path("m.fct"))).size(), 17u);
  auto w = invoke({"check", "wild-frontier", "--machine", m, "--facts", path("m.fct"), "--tape", "1B", "--pos", "1"});
  EXPECT_EQ(w.code, 0) << w.out << w.err;
  auto w2 = invoke({"check", "wild-frontier", "--machine", m, "--facts", path("m.fct"), "--tape", "0B", "--pos", "1"});
  EXPECT_EQ(w2.code, 1);
  auto run = invoke({"tm", "run", "--machine", m, "--word", "0", "--max-steps", "10"});
  EXPECT_EQ(run.code, 0) << run.err;
  EXPECT_EQ(invoke({"tm", "encode", "--machine", m, "--word", "2"}).code, 1);
}

TEST(Cli, StructureChecks) {
  auto b = invoke({"check", "bowtie", "--facts", fx::data_path("fork.fct")});
  EXPECT_EQ(b.code, 1);
  auto c = invoke({"check", "consistency", "--machine", fx::data_path("bounce.tm"), "--word", "0", "--without-brake",
                "--max-steps", "30"});
  EXPECT_EQ(c.code, 0) << c.out << c.err;
}

TEST_F(TempDir, InternalizeAndOblivious) {
  auto r = invoke({"transform", "internalize", "--rules", bicycle_rules, "--facts", bicycle_facts, "-o", path("i.rls")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rules = parse_rules(fx::slurp(path("i.rls")));
  EXPECT_EQ(rules.size(), 5u);
  EXPECT_TRUE(rules.index_of("db"));
  auto empty = write("empty.fct", "");
  EXPECT_EQ(invoke({"transform", "internalize", "--rules", bicycle_rules, "--facts", empty}).code, 1);
  auto o = invoke({"chase", "oblivious", "--rules", brake_rules, "--facts", brake_facts, "--max-steps", "5"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("sk_grow"), std::string::npos);
  EXPECT_EQ(invoke({"chase", "oblivious", "--rules", brake_rules, "--facts", brake_facts, "--strategy", "dfs"}).code, 2);
}
