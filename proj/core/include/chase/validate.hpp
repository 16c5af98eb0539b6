#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chase/engine.hpp"
#include "chase/model.hpp"
#include "chase/tmred.hpp"

namespace chase {

struct CheckResult {
  bool ok = true;
  std::string clause;  // first violated clause when !ok

  explicit operator bool() const { return ok; }
  static CheckResult pass() { return {}; }
  static CheckResult fail(std::string c) { return {false, std::move(c)}; }
};

// ---------------------------------------------------------------- wild frontier

CheckResult check_wild_frontier_report(const FactSet& f, const Configuration& rho, const Term& w,
                                       const std::vector<Term>& cells);
bool check_wild_frontier(const FactSet& f, const Configuration& rho, const Term& w, const std::vector<Term>& cells);

// ---------------------------------------------------------------- state atoms

struct StateAtom {
  Atom atom;  // St_q(x, w)

  const Term& term() const { return atom.args.at(0); }
  const Term& brake() const { return atom.args.at(1); }
  std::string state() const { return state_of_predicate(atom.predicate); }

  friend auto operator<=>(const StateAtom&, const StateAtom&) = default;
};

bool is_brake(const FactSet& f, const Term& t);

// State atoms of f in insertion order.
std::vector<StateAtom> state_atoms(const FactSet& f);

// Some step has a in its support and b in its output.
bool precedes(const Derivation& d, const StateAtom& a, const StateAtom& b);

// The state atom in the support of the step that produced a; nullopt for database atoms.
std::optional<StateAtom> parent_state_atom(const Derivation& d, const StateAtom& a);

// Configuration of a state atom; throws Error if a is not a state atom of d or lacks provenance.
Configuration conf_of(const Derivation& d, const CompiledMachine& cm, const StateAtom& a, const Configuration& rho0);

// Atoms over {x, w} and the terms R-connected to x without passing through a brake, with w only
// in last position.
FactSet associated_atoms(const FactSet& f, const StateAtom& a);

CheckResult check_consistency_report(const Derivation& d, const CompiledMachine& cm, const StateAtom& a,
                                     const Configuration& rho0);
bool check_consistency(const Derivation& d, const CompiledMachine& cm, const StateAtom& a, const Configuration& rho0);

// ---------------------------------------------------------------- bow ties

struct BowTie {
  Term left;   // x of the center edge (x, y)
  Term right;  // y
  std::vector<Term> left_part;
  std::vector<Term> right_part;
};

// Weakly connected component of the state atom's term in (semterms(f), E_R), tested against every
// center edge incident to the term.
std::optional<BowTie> find_bowtie(const FactSet& f, const StateAtom& a);
bool check_bowtie(const FactSet& f, const StateAtom& a);

// Bow-tie check on a bare edge set (vertices are the edge endpoints plus `extra`).
bool is_bowtie(const std::vector<std::pair<Term, Term>>& edges, const Term& x, const Term& y,
               const std::vector<Term>& extra = {});

struct ConfigSet {
  std::vector<Term> path;  // maximal path x_1..x_m through the center
  FactSet atoms;
};

// One element per maximal path; throws Error when the component is not a bow tie.
std::vector<ConfigSet> extract_configs(const FactSet& f, const StateAtom& a);

// Reads the configuration off a path: unique letter per cell, head at the state atom's cell.
// The result need not satisfy the configuration invariants.
std::optional<Configuration> decode_config(const ConfigSet& s, const StateAtom& a);

// Configuration of the parent's structure that produced this path: cells mapped back through F,
// letters copied except at the parent's head, where the transition's read letter is used.
// nullopt if some mapped atom is missing from the fact set.
std::optional<Configuration> decode_source_config(const Derivation& d, const CompiledMachine& cm,
                                                  const ConfigSet& s, const StateAtom& a);

// ---------------------------------------------------------------- scripted simulation

struct WildFrontier {
  Configuration rho;
  Term brake;
  std::vector<Term> cells;  // x_1..x_{n+1}
};

struct ScriptedStep {
  std::vector<TriggerDescriptor> script;
  WildFrontier next;  // frontier the script produces, with predicted null names
};

// Trigger list that turns a wild frontier of w.rho into one of apply_transition(w.rho, tr),
// assuming the derivation's next step index is `first_step` and canonical null naming.
ScriptedStep frontier_script(const CompiledMachine& cm, const WildFrontier& w, const Transition& tr,
                             std::size_t first_step);

}  // namespace chase
