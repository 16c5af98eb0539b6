#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "chase/matching.hpp"
#include "chase/model.hpp"

namespace chase {

class ChaseError : public Error {
 public:
  enum class Kind { not_loaded, obsolete, script_unresolved, already_fired };

  ChaseError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class Status { running, saturated, budget_exhausted, script_exhausted };
std::string to_string(Status s);

// canonical: the k-th existential of the trigger applied at step s becomes n{s}_{k}.
// skolem: a function of (rule id, variable, frontier bindings), so equal triggers give equal nulls.
enum class NullNaming { canonical, skolem };

struct Step {
  std::size_t index = 0;
  Trigger trigger;
  Substitution extension;    // existential variable -> null
  std::vector<Atom> output;  // instantiated head
  std::vector<Atom> added;   // output atoms that were new
  std::size_t facts_before = 0;
};

// F_0 = database, F_{i+1} = F_i ∪ output(step i). Copying a derivation yields an independent branch.
class Derivation {
 public:
  explicit Derivation(KnowledgeBase kb, NullNaming naming = NullNaming::canonical);

  const KnowledgeBase& kb() const { return *kb_; }
  const RuleSet& rules() const { return kb_->rules; }
  const FactSet& database() const { return kb_->database; }
  NullNaming naming() const { return naming_; }

  const FactSet& facts() const { return facts_; }
  const std::vector<Step>& steps() const { return steps_; }
  // Number of fact sets F_0..F_n.
  std::size_t length() const { return steps_.size() + 1; }
  FactSet fact_set_at(std::size_t i) const;

  Status status() const { return status_; }
  void set_status(Status s) { status_ = s; }

  // Step that first emitted the fact; nullopt for database facts and unknown facts.
  std::optional<std::size_t> producing_step(const Atom& fact) const;
  std::vector<Atom> support_of_step(std::size_t step) const;

  bool fired(const Trigger& t) const;

  // Appends a step without any activity check; used by chase_step and the oblivious runner.
  void append(const Trigger& t, Substitution extension, std::vector<Atom> output);

 private:
  std::shared_ptr<const KnowledgeBase> kb_;
  NullNaming naming_;
  FactSet facts_;
  std::vector<Step> steps_;
  std::unordered_map<Atom, std::size_t, AtomHash> produced_by_;
  std::set<Trigger> fired_;
  Status status_ = Status::running;
};

// Null for existential `var` of the trigger applied at `step`.
Term make_null(const RuleSet& rules, const Trigger& t, const std::string& var, std::size_t position,
               std::size_t step, NullNaming naming);

// Instantiated head with fresh nulls. Throws ChaseError if t is not loaded or is obsolete for f.
std::vector<Atom> trigger_output(const RuleSet& rules, const Trigger& t, const FactSet& f, std::size_t step,
                                 NullNaming naming = NullNaming::canonical);

// Applies an active trigger; throws ChaseError otherwise.
Derivation chase_step(Derivation d, const Trigger& t);
void chase_step_inplace(Derivation& d, const Trigger& t);

// Rule id plus bindings for some of its universal variables; resolves to the first active trigger
// in canonical order that agrees with the bindings.
struct TriggerDescriptor {
  std::string rule_id;
  Substitution bindings;

  std::string to_string() const;
  friend bool operator==(const TriggerDescriptor&, const TriggerDescriptor&) = default;
};

std::optional<Trigger> resolve_descriptor(const Derivation& d, const TriggerDescriptor& desc);

struct Fifo {};
struct Dfs {};
struct Random {
  std::uint64_t seed = 0;
};
struct Script {
  std::vector<TriggerDescriptor> choices;
};
using Strategy = std::variant<Fifo, Dfs, Random, Script>;

std::string strategy_name(const Strategy& s);

Derivation run_chase(const KnowledgeBase& kb, const Strategy& s, std::size_t max_steps);
// Continues an existing derivation; max_steps bounds the number of additional steps.
Derivation continue_chase(Derivation d, const Strategy& s, std::size_t max_steps);

Derivation run_oblivious(const KnowledgeBase& kb, const Strategy& s, std::size_t max_steps);

struct DaggerViolation {
  std::size_t at = 0;         // fact-set index i where the trigger is still not obsolete
  std::size_t loaded_at = 0;  // fact-set index k where it was loaded
  std::size_t active_count = 0;
  Trigger trigger;
};

// Earliest i (then smallest k, then canonical trigger) such that the trigger is loaded for F_k,
// not obsolete for F_i, and i - k exceeds the number of active triggers of F_k.
std::optional<DaggerViolation> check_dagger_violation(const Derivation& d);

// Post-hoc validation: every step's trigger was active for the fact set before it, fact sets grow,
// and emitted nulls are fresh. Returns a description of the first problem, or nullopt.
std::optional<std::string> validate_derivation(const Derivation& d);

}  // namespace chase
