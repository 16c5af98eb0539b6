#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"

#include "chase/parse.hpp"
#include "chase/report.hpp"
#include "fixtures.hpp"

using namespace chase;
namespace fx = chase::fixtures;
using nlohmann::json;

namespace {

std::vector<json> lines_of(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

}  // namespace

TEST(Trace, HeaderThenOneLinePerStep) {
  auto d = run_chase(fx::bicycle_kb(), Fifo{}, 10);
  auto lines = lines_of(trace_jsonl(d, "fifo"));
  ASSERT_EQ(lines.size(), d.steps().size() + 1);
  EXPECT_EQ(lines[0]["format"], "chase-trace");
  EXPECT_EQ(lines[0]["version"], trace_format_version);
  EXPECT_EQ(lines[0]["status"], "saturated");
  EXPECT_EQ(lines[0]["database"], json::array({"Bicycle(b)"}));
  EXPECT_EQ(lines[1]["rule"], "bicycle");
  EXPECT_EQ(lines[1]["sigma"]["x"], "b");
  EXPECT_EQ(lines[1]["extension"]["y"], "_:n0_0");
  EXPECT_EQ(lines[2]["step"], 1);
}

TEST(Trace, ReplaysToTheSameFacts) {
  auto d = run_chase(fx::brake_kb(), Fifo{}, 9);
  auto lines = lines_of(trace_jsonl(d, "fifo"));
  FactSet f;
  for (const auto& a : lines[0]["database"]) f.insert(parse_atom(a.get<std::string>()));
  for (std::size_t i = 1; i < lines.size(); ++i)
    for (const auto& a : lines[i]["added"]) f.insert(parse_atom(a.get<std::string>()));
  EXPECT_EQ(f, d.facts());
}

TEST(Dot, NodesEdgesAndHyperedges) {
  auto f = parse_facts("Bicycle(b) . HasPart(b,c) . T(a,b,c) .");
  auto dot = to_dot(f, "g");
  EXPECT_EQ(dot.rfind("digraph \"g\" {", 0), 0u);
  EXPECT_NE(dot.find("\"b\" [label=\"b\\nBicycle\"]"), std::string::npos) << dot;
  EXPECT_NE(dot.find("\"b\" -> \"c\" [label=\"HasPart\"]"), std::string::npos);
  EXPECT_NE(dot.find("shape=point, xlabel=\"T\""), std::string::npos);
  EXPECT_EQ(dot.back(), '\n');
  auto nulls = to_dot(run_chase(fx::bicycle_kb(), Fifo{}, 10).facts());
  EXPECT_NE(nulls.find("style=dashed"), std::string::npos);
}

TEST(Json, Documents) {
  auto v = json::parse(verdict_json(decide_bf(fx::brake_kb(), 8)));
  EXPECT_EQ(v["verdict"], "accepted");
  EXPECT_EQ(v["round"], 5);
  auto t = json::parse(tree_json(explore(fx::bicycle_kb(), 2)));
  EXPECT_EQ(t["depth_bound"], 2);
  EXPECT_TRUE(t.contains("per_depth"));
  auto c = json::parse(check_json("bowtie", CheckResult::fail("no center")));
  EXPECT_EQ(c["ok"], false);
  EXPECT_EQ(c["clause"], "no center");
  EXPECT_EQ(json::parse(dagger_json(std::nullopt))["ok"], true);
  auto dd = check_dagger_violation(run_chase(fx::bicycle_kb(), Dfs{}, 12));
  ASSERT_TRUE(dd);
  auto dj = json::parse(dagger_json(dd));
  EXPECT_EQ(dj["ok"], false);
  EXPECT_GT(dj["at"].get<int>() - dj["loaded_at"].get<int>(), dj["active_count"].get<int>());
  auto dv = json::parse(derivation_json(run_chase(fx::bicycle_kb(), Fifo{}, 10), "fifo"));
  EXPECT_EQ(dv["length"], 3);
  EXPECT_EQ(dv["steps"].size(), 2u);
}
