#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "chase/model.hpp"

namespace chase::oracle {

// Every assignment of the pattern's variables to terms of f (nested loops over the domain),
// filtered by atom membership. Sorted, duplicate-free.
std::vector<Substitution> naive_homomorphisms(const std::vector<Atom>& pattern, const FactSet& f,
                                              const Substitution& partial = {});

// Head under the frontier part of sigma, extended over every assignment of existentials to terms of f.
bool naive_is_obsolete(const Rule& r, const Substitution& sigma, const FactSet& f);

// Naive active triggers: (rule index, sigma) pairs, canonical order.
std::vector<std::pair<std::size_t, Substitution>> naive_active(const RuleSet& rules, const FactSet& f);

// Tries every bijection between the nulls of a and b.
bool brute_isomorphic(const FactSet& a, const FactSet& b);

// Result of exhaustively enumerating restricted derivations that respect the breadth-first condition.
struct BfEnumeration {
  std::size_t longest = 0;      // largest number of fact sets of a respecting derivation
  std::size_t derivations = 0;  // respecting prefixes visited
  bool complete = true;         // false if the length cap cut the search
};

// Depth-first search over all derivation prefixes, recomputing loaded triggers, active counts and
// obsolescence from scratch with the naive matcher at every prefix.
BfEnumeration enumerate_bf(const RuleSet& rules, const FactSet& database, std::size_t max_length);

struct RandomKbOptions {
  std::size_t rules = 3;
  std::size_t predicates = 4;
  std::size_t max_arity = 2;
  std::size_t facts = 4;
  std::size_t constants = 3;
  bool acyclic = false;  // head predicates strictly above body predicates
  double existential_rate = 0.4;
};

KnowledgeBase random_kb(std::mt19937_64& rng, const RandomKbOptions& options);

// Random fact set over a small signature and a random pattern over the same signature.
struct MatchInstance {
  FactSet facts;
  std::vector<Atom> pattern;
};
MatchInstance random_match_instance(std::mt19937_64& rng, std::size_t max_facts);

}  // namespace chase::oracle
