#include <benchmark/benchmark.h>

#include <string>

#include "chase/matching.hpp"
#include "chase/parse.hpp"
#include "chase/termination.hpp"
#include "chase/tmred.hpp"

using namespace chase;

namespace {

// A directed cycle of n constants.
FactSet cycle(std::size_t n) {
  std::string text;
  for (std::size_t i = 0; i < n; ++i)
    text += "E(v" + std::to_string(i) + ",v" + std::to_string((i + 1) % n) + ") .\n";
  return parse_facts(text);
}

const char* brake_rules =
    "grow: Real(?x), E(?x,?y), Real(?y), Brake(?z) -> E(?y,!v), E(!v,?z), Real(!v) .\n"
    "brake: Brake(?x) -> Real(?x) .\n";

}  // namespace

static void BM_PathJoin(benchmark::State& state) {
  auto f = cycle(static_cast<std::size_t>(state.range(0)));
  std::vector<Atom> path{parse_atom("E(?x,?y)"), parse_atom("E(?y,?z)"), parse_atom("E(?z,?w)")};
  for (auto _ : state) benchmark::DoNotOptimize(find_homomorphisms(path, f));
}
BENCHMARK(BM_PathJoin)->Arg(64)->Arg(512)->Arg(4096);

static void BM_ActiveTriggers(benchmark::State& state) {
  auto f = cycle(static_cast<std::size_t>(state.range(0)));
  auto rules = parse_rules("r: E(?x,?y) -> E(?y,!z) .\ns: E(?x,?y), E(?y,?z) -> T(?x,?z) .\n");
  for (auto _ : state) benchmark::DoNotOptimize(active_triggers(rules, f));
}
BENCHMARK(BM_ActiveTriggers)->Arg(64)->Arg(512);

static void BM_FifoSimulation(benchmark::State& state) {
  auto m = parse_machine(
      "states: q0, qloop\nqloop: qloop\ngamma: 0, 1\n"
      "delta: q0,0 -> qloop,1,R\ndelta: qloop,B -> q0,1,L\ndelta: q0,1 -> qloop,1,R\ndelta: qloop,1 -> q0,1,L\n");
  auto cm = compile_machine(m);
  std::vector<Rule> kept;
  for (const auto& r : cm.rules)
    if (cm.at(r.id()).kind != ReductionRule::Kind::brake) kept.push_back(r);
  KnowledgeBase kb(RuleSet(std::move(kept)), encode_config(start_config(m, "0")));
  for (auto _ : state) benchmark::DoNotOptimize(run_chase(kb, Fifo{}, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_FifoSimulation)->Arg(50)->Arg(200);

static void BM_DecideBf(benchmark::State& state) {
  KnowledgeBase kb(parse_rules(brake_rules), parse_facts("Real(a) . E(a,c) . E(c,b) . Real(c) . E(b,b) . Brake(b) ."));
  for (auto _ : state) benchmark::DoNotOptimize(decide_bf(kb, 8));
}
BENCHMARK(BM_DecideBf);
BENCHMARK_MAIN();
