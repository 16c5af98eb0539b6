#pragma once

#include <string>
#include <vector>

#include "chase/engine.hpp"
#include "chase/model.hpp"
#include "chase/tmred.hpp"

namespace chase::fixtures {

std::string data_path(const std::string& name);
std::string slurp(const std::string& path);

KnowledgeBase load_kb(const std::string& rules_file, const std::string& facts_file);
KnowledgeBase bicycle_kb();
KnowledgeBase brake_kb();
Machine load_machine(const std::string& file);

// Six triggers that derive a second bicycle with its own wheel before the part links close (seven fact sets).
std::vector<TriggerDescriptor> bicycle_middle_script();

// k applications of the growing rule along the chain, then the brake rule.
std::vector<TriggerDescriptor> brake_script(std::size_t k);

// D ∪ {E(c,t1)} ∪ {E(ti,ti+1) | i<k} ∪ {E(ti,b), Real(ti) | i≤k} ∪ {Real(b)} with nulls t1..tk.
FactSet brake_expected(std::size_t k);

// Rules of a compiled machine minus the listed rule ids.
RuleSet without(const RuleSet& rules, const std::vector<std::string>& ids);

}  // namespace chase::fixtures
