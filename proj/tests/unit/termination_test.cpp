#include <gtest/gtest.h>

#include "chase/parse.hpp"
#include "chase/termination.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace chase;
namespace fx = chase::fixtures;

TEST(Explore, BicycleHasSaturatedLeafAtDepthTwo) {
  auto tree = explore(fx::bicycle_kb(), 3);
  EXPECT_FALSE(tree.truncated);
  ASSERT_EQ(tree.per_depth.size(), 4u);
  EXPECT_EQ(tree.per_depth[0].nodes, 1u);
  EXPECT_GE(tree.per_depth[2].saturated, 1u);
  EXPECT_GE(tree.saturated_leaves, 1u);
}

TEST(Explore, BicycleHasOpenLeafAtDepthTen) {
  auto tree = explore(fx::bicycle_kb(), 10);
  EXPECT_GE(tree.open_leaves, 1u);
  EXPECT_EQ(tree.per_depth[10].open, tree.open_leaves);
}

TEST(Explore, PathsReplayToTheNode) {
  auto kb = fx::bicycle_kb();
  auto tree = explore(kb, 4);
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    Derivation d(kb);
    for (const auto& t : tree.path_to(i)) chase_step_inplace(d, t);
    EXPECT_EQ(d.facts().size(), tree.nodes[i].fact_count);
    EXPECT_EQ(count_active(kb.rules, d.facts()), tree.nodes[i].active_count);
  }
}

TEST(Explore, WorkersDoNotChangeTheTree) {
  auto one = explore(fx::brake_kb(), 5);
  auto four = explore(fx::brake_kb(), 5, ExploreOptions{4, 2'000'000});
  ASSERT_EQ(one.nodes.size(), four.nodes.size());
  for (std::size_t i = 0; i < one.nodes.size(); ++i) {
    EXPECT_EQ(one.nodes[i].parent, four.nodes[i].parent);
    EXPECT_EQ(one.nodes[i].choice, four.nodes[i].choice);
    EXPECT_EQ(one.nodes[i].fact_count, four.nodes[i].fact_count);
  }
}

TEST(Explore, NodeCapTruncates) {
  auto tree = explore(fx::bicycle_kb(), 30, ExploreOptions{1, 50});
  EXPECT_TRUE(tree.truncated);
  EXPECT_LE(tree.nodes.size(), 50u);
}

TEST(DecideBf, BrakeKbAcceptedAtOracleRound) {
  auto kb = fx::brake_kb();
  auto truth = oracle::enumerate_bf(kb.rules, kb.database, 12);
  ASSERT_TRUE(truth.complete);
  auto v = decide_bf(kb, 20);
  EXPECT_TRUE(v.accepted());
  EXPECT_EQ(v.round, truth.longest + 1);
  EXPECT_LE(v.round, 8u);
}

TEST(DecideBf, BicycleUndecided) {
  auto v = decide_bf(fx::bicycle_kb(), 12);
  EXPECT_FALSE(v.accepted());
  EXPECT_EQ(v.round, 12u);
  EXPECT_FALSE(v.resource_limit);
  EXPECT_EQ(v.rounds.size(), 11u);
  for (const auto& r : v.rounds) EXPECT_GT(r.kept, 0u);
}

TEST(DecideBf, EmptyRuleSetAcceptedAtTwo) {
  auto v = decide_bf(KnowledgeBase(RuleSet(), parse_facts("P(a).")), 5);
  EXPECT_TRUE(v.accepted());
  EXPECT_EQ(v.round, 2u);
}

TEST(DecideBf, CandidateCapReportsResourceLimit) {
  auto v = decide_bf(fx::bicycle_kb(), 30, DecideOptions{3});
  EXPECT_FALSE(v.accepted());
  EXPECT_TRUE(v.resource_limit);
}

TEST(DecideBf, AgreesWithOracleOnSmallKbs) {
  std::mt19937_64 rng(99);
  oracle::RandomKbOptions opt;
  opt.rules = 2;
  opt.predicates = 3;
  opt.facts = 3;
  opt.constants = 2;
  int compared = 0;
  for (int i = 0; i < 40 && compared < 12; ++i) {
    auto kb = oracle::random_kb(rng, opt);
    auto truth = oracle::enumerate_bf(kb.rules, kb.database, 7);
    if (!truth.complete) continue;
    ++compared;
    auto v = decide_bf(kb, 10);
    EXPECT_TRUE(v.accepted()) << print_rules(kb.rules);
    EXPECT_EQ(v.round, truth.longest + 1) << print_rules(kb.rules) << print_facts(kb.database);
  }
  EXPECT_GT(compared, 5);
}

TEST(Internalize, BicycleShape) {
  auto rs = internalize(fx::bicycle_kb());
  ASSERT_EQ(rs.size(), 5u);
  EXPECT_EQ(rs[0].id(), "bicycle");
  EXPECT_EQ(rs[0].body().back(), parse_atom("Bicycle'(b)"));
  EXPECT_EQ(rs[0].head().front().predicate, "HasPart'");
  const auto& db = rs[4];
  EXPECT_EQ(db.id(), internal_database_rule);
  EXPECT_TRUE(db.body().empty());
  EXPECT_EQ(db.head(), std::vector<Atom>{parse_atom("Bicycle'(b)")});
}

TEST(Internalize, BrakeShape) {
  auto rs = internalize(fx::brake_kb());
  ASSERT_EQ(rs.size(), 3u);
  EXPECT_EQ(rs[2].head().size(), 6u);
}

TEST(Internalize, RejectsEmptyDatabase) {
  EXPECT_THROW(internalize(KnowledgeBase(fx::bicycle_kb().rules, FactSet{})), ModelError);
}

TEST(Internalize, AvoidsIdClash) {
  auto kb = KnowledgeBase(parse_rules("db: P(?x) -> Q(?x) ."), parse_facts("P(a)."));
  auto rs = internalize(kb);
  EXPECT_EQ(rs[1].id(), "db_");
}
