#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "chase/parse.hpp"

namespace chase::fixtures {

std::string data_path(const std::string& name) { return std::string(CHASE_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KnowledgeBase load_kb(const std::string& rules_file, const std::string& facts_file) {
  return KnowledgeBase(parse_rules(slurp(data_path(rules_file))), parse_facts(slurp(data_path(facts_file))));
}

KnowledgeBase bicycle_kb() { return load_kb("bicycle.rls", "bicycle.fct"); }
KnowledgeBase brake_kb() { return load_kb("brake.rls", "brake.fct"); }

Machine load_machine(const std::string& file) { return parse_machine(slurp(data_path(file))); }

namespace {
Term c(const char* name) { return Term::constant(name); }
Term n(const std::string& id) { return Term::null(id); }
}  // namespace

std::vector<TriggerDescriptor> bicycle_middle_script() {
  return {
      {"bicycle", {{"x", c("b")}}},
      {"wheel", {{"x", n("n0_0")}}},
      {"bicycle", {{"x", n("n1_0")}}},
      {"has_part", {{"x", n("n1_0")}, {"y", n("n2_0")}}},
      {"has_part", {{"x", c("b")}, {"y", n("n0_0")}}},
      {"is_part_of", {{"x", n("n0_0")}, {"y", n("n1_0")}}},
  };
}

std::vector<TriggerDescriptor> brake_script(std::size_t k) {
  std::vector<TriggerDescriptor> out;
  Term x = c("a");
  Term y = c("c");
  for (std::size_t i = 0; i < k; ++i) {
    out.push_back({"grow", {{"x", x}, {"y", y}, {"z", c("b")}}});
    x = y;
    y = n("n" + std::to_string(i) + "_0");
  }
  out.push_back({"brake", {{"x", c("b")}}});
  return out;
}

FactSet brake_expected(std::size_t k) {
  FactSet f = brake_kb().database;
  auto t = [](std::size_t i) { return n("t" + std::to_string(i)); };
  f.insert(Atom("E", {c("c"), t(1)}));
  for (std::size_t i = 1; i < k; ++i) f.insert(Atom("E", {t(i), t(i + 1)}));
  for (std::size_t i = 1; i <= k; ++i) {
    f.insert(Atom("E", {t(i), c("b")}));
    f.insert(Atom("Real", {t(i)}));
  }
  f.insert(Atom("Real", {c("b")}));
  return f;
}

RuleSet without(const RuleSet& rules, const std::vector<std::string>& ids) {
  std::vector<Rule> kept;
  for (const auto& r : rules)
    if (std::find(ids.begin(), ids.end(), r.id()) == ids.end()) kept.push_back(r);
  return RuleSet(std::move(kept));
}

}  // namespace chase::fixtures
