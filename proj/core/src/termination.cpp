#include "chase/termination.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace chase {

std::vector<Trigger> DerivationTree::path_to(std::size_t node) const {
  std::vector<Trigger> out;
  while (node != TreeNode::no_parent && nodes.at(node).parent != TreeNode::no_parent) {
    out.push_back(nodes[node].choice);
    node = nodes[node].parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- explore

namespace {

struct SubtreeBuilder {
  std::size_t bound;
  std::size_t max_nodes;
  std::atomic<std::size_t>& total;
  std::vector<TreeNode> nodes;  // local indices; parent of the first node is patched by the caller
  bool truncated = false;

  void visit(const Derivation& d, std::size_t parent, std::size_t depth, const Trigger* choice) {
    if (total.fetch_add(1) >= max_nodes) {
      truncated = true;
      return;
    }
    auto active = active_triggers(d.rules(), d.facts());
    std::size_t me = nodes.size();
    TreeNode n;
    n.parent = parent;
    n.depth = depth;
    if (choice) n.choice = *choice;
    n.fact_count = d.facts().size();
    n.active_count = active.size();
    n.saturated = active.empty();
    n.open = !active.empty() && depth == bound;
    nodes.push_back(std::move(n));
    if (active.empty() || depth == bound) return;
    for (const auto& t : active) {
      if (truncated) return;
      Derivation child = d;
      chase_step_inplace(child, t);
      visit(child, me, depth + 1, &t);
    }
  }
};

}  // namespace

DerivationTree explore(const KnowledgeBase& kb, std::size_t depth, const ExploreOptions& options) {
  DerivationTree tree;
  tree.depth_bound = depth;
  std::atomic<std::size_t> total{0};

  Derivation root(kb);
  auto first = active_triggers(root.rules(), root.facts());
  TreeNode r;
  r.fact_count = root.facts().size();
  r.active_count = first.size();
  r.saturated = first.empty();
  r.open = !first.empty() && depth == 0;
  tree.nodes.push_back(r);
  total = 1;

  if (!first.empty() && depth > 0) {
    std::vector<SubtreeBuilder> parts;
    parts.reserve(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) parts.push_back(SubtreeBuilder{depth, options.max_nodes, total, {}, false});

    auto work = [&](std::size_t i) {
      Derivation child = root;
      chase_step_inplace(child, first[i]);
      parts[i].visit(child, TreeNode::no_parent, 1, &first[i]);
    };

    std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, first.size()));
    if (workers == 1) {
      for (std::size_t i = 0; i < first.size(); ++i) work(i);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t i = next.fetch_add(1); i < first.size(); i = next.fetch_add(1)) work(i);
        });
      }
      for (auto& th : pool) th.join();
    }

    // Merge subtrees in canonical order, rebasing local parent indices.
    for (auto& part : parts) {
      std::size_t offset = tree.nodes.size();
      for (auto& n : part.nodes) {
        n.parent = n.parent == TreeNode::no_parent ? 0 : n.parent + offset;
        tree.nodes.push_back(std::move(n));
      }
      tree.truncated = tree.truncated || part.truncated;
    }
  }

  tree.per_depth.resize(depth + 1);
  for (std::size_t d = 0; d <= depth; ++d) tree.per_depth[d].depth = d;
  for (const auto& n : tree.nodes) {
    auto& s = tree.per_depth[n.depth];
    ++s.nodes;
    if (n.saturated) {
      ++s.saturated;
      ++tree.saturated_leaves;
    }
    if (n.open) {
      ++s.open;
      ++tree.open_leaves;
    }
  }
  return tree;
}

// ---------------------------------------------------------------- decide_bf

std::string Verdict::to_string() const {
  if (kind == Kind::accepted) return "accepted at round " + std::to_string(round);
  std::string out = "undecided after round " + std::to_string(round);
  if (resource_limit) out += " (candidate cap reached)";
  return out;
}

namespace {

// A list F_1..F_i together with, per fact set, the triggers loaded for it and the count of
// triggers that are loaded and not obsolete for it.
struct Prefix {
  Derivation d;
  std::vector<std::vector<Trigger>> loaded;
  std::vector<std::size_t> active_count;
};

void record_last(Prefix& p) {
  const auto& rules = p.d.rules();
  const auto& f = p.d.facts();
  auto loaded = loaded_triggers(rules, f);
  std::size_t active = 0;
  for (const auto& t : loaded)
    if (!is_obsolete(rules, t, f)) ++active;
  p.loaded.push_back(std::move(loaded));
  p.active_count.push_back(active);
}

// True if some k and loaded trigger λ of F_k leave λ unobsolete at F_i with i - k > n_k.
bool violates(const Prefix& p) {
  const std::size_t i = p.loaded.size();  // 1-based index of the last fact set
  const auto& rules = p.d.rules();
  const auto& last = p.d.facts();
  for (std::size_t k = 1; k <= i; ++k) {
    if (i - k <= p.active_count[k - 1]) continue;
    for (const auto& t : p.loaded[k - 1])
      if (!is_obsolete(rules, t, last)) return true;
  }
  return false;
}

}  // namespace

Verdict decide_bf(const KnowledgeBase& kb, std::size_t max_rounds, const DecideOptions& options) {
  Verdict v;
  std::vector<Prefix> current;
  current.push_back(Prefix{Derivation(kb), {}, {}});
  record_last(current.back());

  for (std::size_t i = 2; i <= max_rounds; ++i) {
    std::vector<Prefix> next;
    std::size_t candidates = 0;
    for (const auto& p : current) {
      std::vector<Prefix> children;
      for (const auto& t : active_triggers(p.d.rules(), p.d.facts())) {
        Prefix c{chase_step(p.d, t), p.loaded, p.active_count};
        bool duplicate = std::any_of(children.begin(), children.end(),
                                     [&](const Prefix& s) { return s.d.facts() == c.d.facts(); });
        if (!duplicate) children.push_back(std::move(c));
      }
      candidates += children.size();
      if (candidates > options.max_candidates) {
        v.kind = Verdict::Kind::undecided;
        v.round = i;
        v.resource_limit = true;
        v.rounds.push_back(RoundStats{i, candidates, 0});
        return v;
      }
      for (auto& c : children) {
        record_last(c);
        if (!violates(c)) next.push_back(std::move(c));
      }
    }
    v.rounds.push_back(RoundStats{i, candidates, next.size()});
    if (next.empty()) {
      v.kind = Verdict::Kind::accepted;
      v.round = i;
      return v;
    }
    current = std::move(next);
  }
  v.kind = Verdict::Kind::undecided;
  v.round = max_rounds;
  return v;
}

// ---------------------------------------------------------------- internalize

std::string primed(const std::string& predicate) { return predicate + "'"; }

Atom prime_atom(const Atom& a) { return Atom(primed(a.predicate), a.args); }

FactSet prime_facts(const FactSet& f) {
  FactSet out;
  for (const auto& a : f) out.insert(prime_atom(a));
  return out;
}

RuleSet internalize(const KnowledgeBase& kb) {
  if (kb.database.empty())
    throw ModelError("cannot internalize an empty database: the added rule would have an empty head");
  std::vector<Atom> db;
  for (const auto& a : kb.database) db.push_back(prime_atom(a));

  std::vector<Rule> out;
  for (const auto& r : kb.rules) {
    std::vector<Atom> body;
    for (const auto& a : r.body()) body.push_back(prime_atom(a));
    body.insert(body.end(), db.begin(), db.end());
    std::vector<Atom> head;
    for (const auto& a : r.head()) head.push_back(prime_atom(a));
    out.emplace_back(r.id(), std::move(body), std::move(head));
  }
  std::string id = internal_database_rule;
  while (kb.rules.index_of(id)) id += "_";
  out.emplace_back(id, std::vector<Atom>{}, db);
  return RuleSet(std::move(out));
}

}  // namespace chase
