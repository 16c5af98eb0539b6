#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "chase/engine.hpp"
#include "chase/model.hpp"

namespace chase {

struct TreeNode {
  static constexpr std::size_t no_parent = std::numeric_limits<std::size_t>::max();

  std::size_t parent = no_parent;
  std::size_t depth = 0;
  Trigger choice;  // trigger applied to reach this node (unset for the root)
  std::size_t fact_count = 0;
  std::size_t active_count = 0;
  bool saturated = false;  // no active trigger
  bool open = false;       // cut off by the depth bound with active triggers left
};

struct DepthStats {
  std::size_t depth = 0;
  std::size_t nodes = 0;
  std::size_t saturated = 0;
  std::size_t open = 0;
};

struct DerivationTree {
  std::size_t depth_bound = 0;
  std::vector<TreeNode> nodes;  // pre-order, children in canonical trigger order
  std::vector<DepthStats> per_depth;
  std::size_t saturated_leaves = 0;
  std::size_t open_leaves = 0;
  bool truncated = false;  // node cap reached; the tree is incomplete

  // Applied triggers from the root to the node.
  std::vector<Trigger> path_to(std::size_t node) const;
};

struct ExploreOptions {
  std::size_t workers = 1;
  std::size_t max_nodes = 2'000'000;
};

// All restricted-chase derivations of the KB up to `depth` steps (depth-limited DFS).
DerivationTree explore(const KnowledgeBase& kb, std::size_t depth, const ExploreOptions& options = {});

struct RoundStats {
  std::size_t round = 0;
  std::size_t candidates = 0;  // |C_i|
  std::size_t kept = 0;        // |P_i|
};

struct Verdict {
  enum class Kind { accepted, undecided };
  Kind kind = Kind::undecided;
  std::size_t round = 0;        // accepting round, or the exhausted budget
  bool resource_limit = false;  // undecided because |C_i| exceeded the candidate cap
  std::vector<RoundStats> rounds;

  bool accepted() const { return kind == Kind::accepted; }
  std::string to_string() const;
};

struct DecideOptions {
  std::size_t max_candidates = 500'000;
};

// Breadth-first semi-decision procedure over (†)-respecting derivation prefixes.
Verdict decide_bf(const KnowledgeBase& kb, std::size_t max_rounds, const DecideOptions& options = {});

// Predicate renaming P -> P' used by internalize.
std::string primed(const std::string& predicate);
Atom prime_atom(const Atom& a);
FactSet prime_facts(const FactSet& f);

// Id of the empty-body rule added by internalize.
inline constexpr const char* internal_database_rule = "db";

// Rules whose chase over any database mirrors the chase of the KB. Throws ModelError for an empty
// database (the added rule would have an empty head).
RuleSet internalize(const KnowledgeBase& kb);

}  // namespace chase
