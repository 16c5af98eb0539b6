#pragma once

#include <string>

#include "chase/engine.hpp"
#include "chase/termination.hpp"
#include "chase/validate.hpp"

namespace chase {

inline constexpr int trace_format_version = 1;

// JSON Lines: a header object (format, version, strategy, status, database) followed by one
// object per step.
std::string trace_jsonl(const Derivation& d, const std::string& strategy);

// Graphviz rendering: binary atoms become labelled edges, unary atoms node labels, and atoms of
// higher arity small hyperedge nodes linked to their arguments in order.
std::string to_dot(const FactSet& f, const std::string& graph_name = "facts");

std::string derivation_json(const Derivation& d, const std::string& strategy);
std::string verdict_json(const Verdict& v);
std::string tree_json(const DerivationTree& t);
std::string check_json(const std::string& check, const CheckResult& r);
std::string dagger_json(const std::optional<DaggerViolation>& v);

}  // namespace chase
