#pragma once

#include <span>
#include <string>
#include <vector>

#include "chase/model.hpp"

namespace chase {

struct Trigger {
  std::size_t rule_index = 0;
  std::string rule_id;
  Substitution sigma;  // total on the rule's universal variables

  std::string to_string() const;

  friend bool operator==(const Trigger& a, const Trigger& b) {
    return a.rule_index == b.rule_index && a.rule_id == b.rule_id && a.sigma == b.sigma;
  }
  // Canonical order: rule position, then bindings lexicographically by variable name.
  friend bool operator<(const Trigger& a, const Trigger& b) {
    if (a.rule_index != b.rule_index) return a.rule_index < b.rule_index;
    return a.sigma < b.sigma;
  }
};

// All substitutions extending `partial` that map every pattern atom into f, sorted and distinct.
// Only variables of the pattern (plus those already in `partial`) are bound.
std::vector<Substitution> find_homomorphisms(std::span<const Atom> pattern, const FactSet& f,
                                             const Substitution& partial = {});

bool has_homomorphism(std::span<const Atom> pattern, const FactSet& f, const Substitution& partial = {});

// Builds a trigger for a rule of `rules`; throws ModelError for an unknown id.
Trigger make_trigger(const RuleSet& rules, const std::string& rule_id, Substitution sigma);

std::vector<Atom> support(const RuleSet& rules, const Trigger& t);

// Both throw ModelError if t.rule_id is not in `rules`.
bool is_loaded(const RuleSet& rules, const Trigger& t, const FactSet& f);
bool is_obsolete(const RuleSet& rules, const Trigger& t, const FactSet& f);

std::vector<Trigger> loaded_triggers(const RuleSet& rules, const FactSet& f);
// Loaded and not obsolete, in canonical order.
std::vector<Trigger> active_triggers(const RuleSet& rules, const FactSet& f);
std::size_t count_active(const RuleSet& rules, const FactSet& f);

}  // namespace chase
