#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chase/model.hpp"

namespace chase {

inline constexpr const char* blank = "B";

enum class Move { left, right };

struct Transition {
  std::string state;  // successor state
  std::string write;  // written letter, never blank
  Move move = Move::right;

  friend auto operator<=>(const Transition&, const Transition&) = default;
};

struct Machine {
  std::vector<std::string> states;
  std::string initial;
  std::string loop_state;
  std::vector<std::string> alphabet;  // Γ, without the blank
  // (state, read letter) -> transitions; the read letter may be the blank.
  std::map<std::pair<std::string, std::string>, std::vector<Transition>> delta;

  // Γ followed by the blank.
  std::vector<std::string> letters() const;
  const std::vector<Transition>& transitions(const std::string& state, const std::string& letter) const;
  std::size_t transition_count() const;

  // Throws ModelError when names are malformed, unknown, or a transition writes a blank.
  void validate() const;
};

// Machine file: `states:` (names separated by spaces or commas), optional `initial:` (defaults to the first state), `qloop:`, `gamma:`
// and any number of `delta: q,a -> q',b,R|L` lines; `%` starts a comment.
Machine parse_machine(std::string_view text);
std::string print_machine(const Machine& m);

// Tape cells are 1-based in the documentation; `tape[i-1]` holds t(i).
struct Configuration {
  std::vector<std::string> tape;
  std::size_t head = 1;
  std::string state;

  std::size_t n() const { return tape.size(); }
  const std::string& at(std::size_t i) const { return tape.at(i - 1); }
  // t(i) with t(n+1) read as the blank.
  std::string letter(std::size_t i) const;
  std::string tape_string() const;  // letters concatenated, e.g. "11B"
  std::string to_string() const;    // e.g. "<3, [1,B,B], 2, qloop>"

  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

// Blank-terminated, blank suffix-closed tape, head in range, known state and letters.
bool is_valid(const Machine& m, const Configuration& c);

// Throws ModelError for a symbol outside {0,1}.
Configuration start_config(const Machine& m, std::string_view word);

// Parses a tape like "11B" or "1,1,B" into a configuration.
Configuration make_config(const Machine& m, std::string_view tape, std::size_t head, const std::string& state);

// Successor of c under one transition: n+1 cells, t'(p) = write, head moved.
Configuration apply_transition(const Configuration& c, const Transition& tr);

// All successors in transition order; left moves at p = 1 are excluded.
std::vector<Configuration> next_configs(const Machine& m, const Configuration& c);

enum class RunPolicy { first, random };

struct MachineRun {
  std::vector<Configuration> trace;  // c0, c1, ...
  std::size_t occurrences = 0;       // configurations of the trace in the counted state
  bool halted = false;               // some configuration had no successor
};

MachineRun run_machine(const Machine& m, const Configuration& c0, std::size_t max_steps, const std::string& count_state,
                       RunPolicy policy = RunPolicy::first, std::uint64_t seed = 0);

// ---------------------------------------------------------------- reduction

namespace pred {
inline const std::string F = "F";
inline const std::string R = "R";
inline const std::string C_L = "C_L";
inline const std::string C_R = "C_R";
inline const std::string Real = "Real";
inline const std::string Brake = "Brake";
inline const std::string End = "End";
inline const std::string NextBr = "NextBr";
}  // namespace pred

std::string letter_predicate(const std::string& letter);  // Sym_<a>
std::string state_predicate(const std::string& state);    // St_<q>
bool is_letter_predicate(const std::string& predicate);
bool is_state_predicate(const std::string& predicate);
std::string letter_of_predicate(const std::string& predicate);
std::string state_of_predicate(const std::string& predicate);

// {F(x,w,w), R(x,w,w), Real(x), Brake(w)}
std::vector<Atom> br_set(const Term& x, const Term& w);

struct ReductionRule {
  enum class Kind { brake, next_br, step, copy_right, copy_left, end };
  Kind kind = Kind::brake;
  // step rules
  std::string from_state;
  std::string read;
  Transition transition;
  std::string neighbour;  // letter c of the neighbour cell
  // copy rules
  std::string letter;
  bool fresh_brake = false;  // step rule out of the loop state
};

struct CompiledMachine {
  RuleSet rules;
  std::map<std::string, ReductionRule> info;  // rule id -> schema instance

  const ReductionRule& at(const std::string& rule_id) const;
  std::string step_rule_id(const std::string& from, const std::string& read, const Transition& tr,
                           const std::string& neighbour) const;
};

CompiledMachine compile_machine(const Machine& m);
RuleSet compile_ruleset(const Machine& m);

// Cells c1..c{n+1} and brake w1.
Term cell_constant(std::size_t i);
Term initial_brake();
FactSet encode_config(const Configuration& c);

}  // namespace chase
