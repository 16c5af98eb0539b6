#include "chase/validate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace chase {

// ---------------------------------------------------------------- wild frontier

CheckResult check_wild_frontier_report(const FactSet& f, const Configuration& rho, const Term& w,
                                       const std::vector<Term>& cells) {
  const std::size_t n = rho.n();
  if (cells.size() != n + 1) return CheckResult::fail("expected " + std::to_string(n + 1) + " cells");
  auto x = [&](std::size_t i) -> const Term& { return cells[i - 1]; };

  if (f.contains(Atom(pred::Real, {w}))) return CheckResult::fail("Real(" + w.to_string() + ") is present");

  std::set<Atom> required;
  auto need = [&](const Atom& a) {
    required.insert(a);
    return f.contains(a);
  };
  for (std::size_t i = 1; i <= n; ++i) {
    Atom r(pred::R, {x(i), x(i + 1), w});
    if (!need(r)) return CheckResult::fail("missing " + r.to_string());
    Atom l(letter_predicate(rho.at(i)), {x(i), w});
    if (!need(l)) return CheckResult::fail("missing " + l.to_string());
  }
  for (const auto& a : {Atom(state_predicate(rho.state), {x(rho.head), w}), Atom(pred::End, {x(n + 1), w}),
                        Atom(letter_predicate(blank), {x(n + 1), w})}) {
    if (!need(a)) return CheckResult::fail("missing " + a.to_string());
  }
  for (std::size_t i = 1; i <= n + 1; ++i) {
    for (const auto& a : br_set(x(i), w))
      if (!need(a)) return CheckResult::fail("missing " + a.to_string() + " of brSet");
  }

  std::set<Term> cell_set(cells.begin(), cells.end());
  for (const auto& a : f) {
    if (a.args.empty() || !cell_set.contains(a.args[0]) || required.contains(a)) continue;
    if (a.args.size() < 2 || a.args[1] != w)
      return CheckResult::fail("stray atom " + a.to_string() + " does not have " + w.to_string() + " second");
  }
  return CheckResult::pass();
}

bool check_wild_frontier(const FactSet& f, const Configuration& rho, const Term& w, const std::vector<Term>& cells) {
  return check_wild_frontier_report(f, rho, w, cells).ok;
}

// ---------------------------------------------------------------- state atoms

bool is_brake(const FactSet& f, const Term& t) { return f.contains(Atom(pred::Brake, {t})); }

std::vector<StateAtom> state_atoms(const FactSet& f) {
  std::vector<StateAtom> out;
  for (const auto& a : f)
    if (is_state_predicate(a.predicate) && a.arity() == 2 && !is_brake(f, a.args[0])) out.push_back(StateAtom{a});
  return out;
}

bool precedes(const Derivation& d, const StateAtom& a, const StateAtom& b) {
  for (const auto& s : d.steps()) {
    if (std::find(s.output.begin(), s.output.end(), b.atom) == s.output.end()) continue;
    auto sup = d.support_of_step(s.index);
    if (std::find(sup.begin(), sup.end(), a.atom) != sup.end()) return true;
  }
  return false;
}

std::optional<StateAtom> parent_state_atom(const Derivation& d, const StateAtom& a) {
  auto step = d.producing_step(a.atom);
  if (!step) return std::nullopt;
  for (const auto& s : d.support_of_step(*step)) {
    if (is_state_predicate(s.predicate) && s.arity() == 2 && !is_brake(d.facts(), s.args[0])) return StateAtom{s};
  }
  return std::nullopt;
}

Configuration conf_of(const Derivation& d, const CompiledMachine& cm, const StateAtom& a, const Configuration& rho0) {
  if (!d.facts().contains(a.atom) || !is_state_predicate(a.atom.predicate) || is_brake(d.facts(), a.term()))
    throw Error(a.atom.to_string() + " is not a state atom of the derivation");
  std::vector<Transition> chain;
  StateAtom cur = a;
  while (!d.database().contains(cur.atom)) {
    auto step = d.producing_step(cur.atom);
    if (!step) throw Error("no provenance for " + cur.atom.to_string());
    const auto& info = cm.at(d.steps()[*step].trigger.rule_id);
    if (info.kind != ReductionRule::Kind::step)
      throw Error(cur.atom.to_string() + " was not produced by a transition rule");
    chain.push_back(info.transition);
    auto parent = parent_state_atom(d, cur);
    if (!parent) throw Error("no parent state atom for " + cur.atom.to_string());
    cur = *parent;
  }
  Configuration c = rho0;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) c = apply_transition(c, *it);
  return c;
}

namespace {

struct RGraph {
  std::map<Term, std::set<Term>> out;
  std::map<Term, std::set<Term>> in;
};

// E_R restricted to non-brake endpoints.
RGraph r_graph(const FactSet& f) {
  RGraph g;
  for (auto idx : f.with_predicate(pred::R)) {
    const Atom& a = f.facts()[idx];
    if (a.arity() != 3 || is_brake(f, a.args[0]) || is_brake(f, a.args[1])) continue;
    g.out[a.args[0]].insert(a.args[1]);
    g.in[a.args[1]].insert(a.args[0]);
  }
  return g;
}

std::set<Term> closure(const std::map<Term, std::set<Term>>& adj, const Term& start) {
  std::set<Term> seen{start};
  std::vector<Term> stack{start};
  while (!stack.empty()) {
    Term t = stack.back();
    stack.pop_back();
    auto it = adj.find(t);
    if (it == adj.end()) continue;
    for (const auto& v : it->second)
      if (seen.insert(v).second) stack.push_back(v);
  }
  return seen;
}

// Nodes at path distance exactly i from `start`, for i = 0..limit.
std::vector<std::set<Term>> layers(const std::map<Term, std::set<Term>>& adj, const Term& start, std::size_t limit) {
  std::vector<std::set<Term>> out{{start}};
  for (std::size_t i = 1; i <= limit; ++i) {
    std::set<Term> next;
    for (const auto& t : out.back()) {
      auto it = adj.find(t);
      if (it != adj.end()) next.insert(it->second.begin(), it->second.end());
    }
    if (next.empty()) break;
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace

FactSet associated_atoms(const FactSet& f, const StateAtom& a) {
  const Term& x = a.term();
  const Term& w = a.brake();
  auto g = r_graph(f);
  auto fwd = closure(g.out, x);
  auto bwd = closure(g.in, x);
  std::set<Term> allowed(fwd.begin(), fwd.end());
  allowed.insert(bwd.begin(), bwd.end());
  allowed.insert(w);

  FactSet out;
  for (const auto& atom : f) {
    bool ok = true;
    for (std::size_t i = 0; i < atom.args.size() && ok; ++i) {
      const Term& t = atom.args[i];
      if (!allowed.contains(t)) ok = false;
      if (t == w && i + 1 != atom.args.size()) ok = false;
    }
    if (ok) out.insert(atom);
  }
  return out;
}

CheckResult check_consistency_report(const Derivation& d, const CompiledMachine& cm, const StateAtom& a,
                                     const Configuration& rho0) {
  const Configuration conf = conf_of(d, cm, a, rho0);
  const FactSet assoc = associated_atoms(d.facts(), a);
  const Term& x = a.term();
  const Term& w = a.brake();
  const std::size_t n = conf.n();
  const std::size_t p = conf.head;

  for (const auto& atom : assoc) {
    if (is_state_predicate(atom.predicate) && atom != a.atom)
      return CheckResult::fail("second state atom " + atom.to_string());
  }
  if (a.state() != conf.state) return CheckResult::fail("state " + a.state() + " differs from " + conf.state);

  std::vector<Atom> at_x;
  for (const auto& atom : assoc) {
    if (!is_letter_predicate(atom.predicate)) continue;
    if (std::find(atom.args.begin(), atom.args.end(), x) != atom.args.end()) at_x.push_back(atom);
  }
  if (at_x.size() != 1) return CheckResult::fail("expected exactly one letter atom at the head cell");
  if (at_x[0].arity() != 2 || at_x[0].args[0] != x || at_x[0].args[1] != w)
    return CheckResult::fail("malformed head letter atom " + at_x[0].to_string());
  if (letter_of_predicate(at_x[0].predicate) != conf.at(p))
    return CheckResult::fail("head letter " + at_x[0].to_string() + " differs from t(p) = " + conf.at(p));

  RGraph g;
  for (auto idx : assoc.with_predicate(pred::R)) {
    const Atom& r = assoc.facts()[idx];
    if (r.arity() != 3) continue;
    g.out[r.args[0]].insert(r.args[1]);
    g.in[r.args[1]].insert(r.args[0]);
  }
  auto letters_of = [&](const Term& t) {
    std::vector<Atom> out;
    for (const auto& atom : assoc)
      if (is_letter_predicate(atom.predicate) && !atom.args.empty() && atom.args[0] == t) out.push_back(atom);
    return out;
  };

  const auto fwd = layers(g.out, x, n + 2);
  for (std::size_t i = 1; i < fwd.size(); ++i) {
    for (const auto& t : fwd[i]) {
      for (const auto& l : letters_of(t)) {
        if (l.arity() != 2 || l.args[1] != w) return CheckResult::fail("letter atom " + l.to_string() + " not over w");
        if (p + i > n + 1) return CheckResult::fail("letter atom " + l.to_string() + " beyond the tape end");
        if (letter_of_predicate(l.predicate) != conf.letter(p + i))
          return CheckResult::fail("letter atom " + l.to_string() + " differs from t(" + std::to_string(p + i) + ")");
      }
    }
  }
  const auto bwd = layers(g.in, x, n + 2);
  for (std::size_t i = 1; i < bwd.size(); ++i) {
    for (const auto& t : bwd[i]) {
      for (const auto& l : letters_of(t)) {
        if (l.arity() != 2 || l.args[1] != w) return CheckResult::fail("letter atom " + l.to_string() + " not over w");
        if (i >= p) return CheckResult::fail("letter atom " + l.to_string() + " before the tape start");
        if (letter_of_predicate(l.predicate) != conf.letter(p - i))
          return CheckResult::fail("letter atom " + l.to_string() + " differs from t(" + std::to_string(p - i) + ")");
      }
    }
  }

  auto ends = assoc.with_predicate(pred::End);
  if (ends.size() > 1) return CheckResult::fail("more than one End atom");
  if (ends.size() == 1) {
    const Atom& e = assoc.facts()[ends[0]];
    if (e.arity() != 2 || e.args[1] != w) return CheckResult::fail("End atom " + e.to_string() + " not over w");
    std::size_t dist = n + 1 - p;
    if (dist >= fwd.size() || !fwd[dist].contains(e.args[0]))
      return CheckResult::fail("End atom " + e.to_string() + " not at distance n+1-p from the head");
  }
  return CheckResult::pass();
}

bool check_consistency(const Derivation& d, const CompiledMachine& cm, const StateAtom& a, const Configuration& rho0) {
  return check_consistency_report(d, cm, a, rho0).ok;
}

// ---------------------------------------------------------------- bow ties

namespace {

using Edge = std::pair<Term, Term>;

std::set<Term> weak_component(const std::set<Term>& vertices, const std::vector<Edge>& edges, const Term& start,
                              const std::optional<Term>& removed) {
  // union-find over vertex indices
  std::vector<Term> vs(vertices.begin(), vertices.end());
  std::map<Term, std::size_t> idx;
  for (std::size_t i = 0; i < vs.size(); ++i) idx[vs[i]] = i;
  std::vector<std::size_t> parent(vs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (const auto& [u, v] : edges) {
    if (removed && (u == *removed || v == *removed)) continue;
    if (!idx.contains(u) || !idx.contains(v)) continue;
    parent[find(idx[u])] = find(idx[v]);
  }
  std::set<Term> out;
  if (!idx.contains(start)) return out;
  std::size_t root = find(idx[start]);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (removed && vs[i] == *removed) continue;
    if (find(i) == root) out.insert(vs[i]);
  }
  return out;
}

// Directed tree rooted at `root` over the edges inside `part`; `inverted` flips every edge.
bool is_rooted_tree(const std::set<Term>& part, const std::vector<Edge>& edges, const Term& root, bool inverted) {
  std::map<Term, std::size_t> indegree;
  std::size_t count = 0;
  for (const auto& [u0, v0] : edges) {
    const Term& u = inverted ? v0 : u0;
    const Term& v = inverted ? u0 : v0;
    if (!part.contains(u) || !part.contains(v)) continue;
    ++count;
    ++indegree[v];
  }
  if (count + 1 != part.size()) return false;
  for (const auto& t : part) {
    std::size_t deg = indegree.contains(t) ? indegree[t] : 0;
    if (t == root ? deg != 0 : deg != 1) return false;
  }
  return true;
}

struct Component {
  std::set<Term> vertices;
  std::vector<Edge> edges;
};

Component component_of(const FactSet& f, const Term& x) {
  std::set<Edge> edge_set;
  std::set<Term> vertices{x};
  for (auto idx : f.with_predicate(pred::R)) {
    const Atom& a = f.facts()[idx];
    if (a.arity() != 3 || is_brake(f, a.args[0]) || is_brake(f, a.args[1])) continue;
    edge_set.emplace(a.args[0], a.args[1]);
    vertices.insert(a.args[0]);
    vertices.insert(a.args[1]);
  }
  std::vector<Edge> edges(edge_set.begin(), edge_set.end());
  Component c;
  c.vertices = weak_component(vertices, edges, x, std::nullopt);
  for (const auto& e : edges)
    if (c.vertices.contains(e.first)) c.edges.push_back(e);
  return c;
}

std::optional<BowTie> try_center(const Component& c, const Term& x, const Term& y) {
  if (std::find(c.edges.begin(), c.edges.end(), Edge{x, y}) == c.edges.end()) return std::nullopt;
  auto left = weak_component(c.vertices, c.edges, x, y);
  auto right = weak_component(c.vertices, c.edges, y, x);
  for (const auto& t : left)
    if (right.contains(t)) return std::nullopt;
  if (left.size() + right.size() != c.vertices.size()) return std::nullopt;
  if (!is_rooted_tree(left, c.edges, x, true)) return std::nullopt;
  if (!is_rooted_tree(right, c.edges, y, false)) return std::nullopt;
  return BowTie{x, y, {left.begin(), left.end()}, {right.begin(), right.end()}};
}

}  // namespace

bool is_bowtie(const std::vector<std::pair<Term, Term>>& edges, const Term& x, const Term& y,
               const std::vector<Term>& extra) {
  Component c;
  std::set<Edge> uniq(edges.begin(), edges.end());
  c.edges.assign(uniq.begin(), uniq.end());
  for (const auto& [u, v] : c.edges) {
    c.vertices.insert(u);
    c.vertices.insert(v);
  }
  c.vertices.insert(extra.begin(), extra.end());
  return try_center(c, x, y).has_value();
}

std::optional<BowTie> find_bowtie(const FactSet& f, const StateAtom& a) {
  const Term& x = a.term();
  auto c = component_of(f, x);
  for (const auto& [u, v] : c.edges) {
    if (u != x && v != x) continue;
    if (auto bt = try_center(c, u, v)) return bt;
  }
  return std::nullopt;
}

bool check_bowtie(const FactSet& f, const StateAtom& a) { return find_bowtie(f, a).has_value(); }

std::vector<ConfigSet> extract_configs(const FactSet& f, const StateAtom& a) {
  auto bt = find_bowtie(f, a);
  if (!bt) throw Error("component of " + a.atom.to_string() + " is not a bow tie");
  auto c = component_of(f, a.term());
  std::set<Term> left(bt->left_part.begin(), bt->left_part.end());
  std::set<Term> right(bt->right_part.begin(), bt->right_part.end());
  std::map<Term, std::set<Term>> out_edges;
  std::map<Term, std::set<Term>> in_edges;
  for (const auto& [u, v] : c.edges) {
    out_edges[u].insert(v);
    in_edges[v].insert(u);
  }

  // Left tree: leaves have no predecessor inside the left part; walk to x along unique successors.
  std::vector<std::vector<Term>> left_paths;
  for (const auto& t : left) {
    bool leaf = true;
    for (const auto& u : in_edges[t])
      if (left.contains(u)) leaf = false;
    if (!leaf) continue;
    std::vector<Term> path{t};
    while (path.back() != bt->left) {
      const Term cur = path.back();
      for (const auto& v : out_edges[cur])
        if (left.contains(v)) {
          path.push_back(v);
          break;
        }
    }
    left_paths.push_back(std::move(path));
  }
  // Right tree: leaves have no successor inside the right part; walk back to y.
  std::vector<std::vector<Term>> right_paths;
  for (const auto& t : right) {
    bool leaf = true;
    for (const auto& v : out_edges[t])
      if (right.contains(v)) leaf = false;
    if (!leaf) continue;
    std::vector<Term> path{t};
    while (path.back() != bt->right) {
      const Term cur = path.back();
      for (const auto& u : in_edges[cur])
        if (right.contains(u)) {
          path.push_back(u);
          break;
        }
    }
    std::reverse(path.begin(), path.end());
    right_paths.push_back(std::move(path));
  }

  const Term& w = a.brake();
  std::vector<ConfigSet> out;
  for (const auto& lp : left_paths) {
    for (const auto& rp : right_paths) {
      ConfigSet s;
      s.path = lp;
      s.path.insert(s.path.end(), rp.begin(), rp.end());
      std::set<Term> on_path(s.path.begin(), s.path.end());
      s.atoms.insert(a.atom);
      for (const auto& x : s.path)
        for (const auto& b : br_set(x, w)) s.atoms.insert(b);
      for (const auto& atom : f) {
        if (atom.predicate != pred::R && atom.predicate != pred::End && !is_letter_predicate(atom.predicate)) continue;
        if (atom.args.empty() || atom.args.back() != w) continue;
        bool inside = std::all_of(atom.args.begin(), atom.args.end() - 1,
                                  [&](const Term& t) { return on_path.contains(t); });
        if (inside) s.atoms.insert(atom);
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

namespace {

std::optional<std::string> unique_letter(const FactSet& f, const Term& x, const Term& w) {
  std::optional<std::string> found;
  for (const auto& atom : f) {
    if (!is_letter_predicate(atom.predicate) || atom.arity() != 2 || atom.args[0] != x || atom.args[1] != w) continue;
    if (found) return std::nullopt;
    found = letter_of_predicate(atom.predicate);
  }
  return found;
}

}  // namespace

std::optional<Configuration> decode_config(const ConfigSet& s, const StateAtom& a) {
  Configuration c;
  c.state = a.state();
  c.head = 0;
  for (std::size_t i = 0; i < s.path.size(); ++i) {
    auto l = unique_letter(s.atoms, s.path[i], a.brake());
    if (!l) return std::nullopt;
    c.tape.push_back(*l);
    if (s.path[i] == a.term()) c.head = i + 1;
  }
  if (c.head == 0) return std::nullopt;
  return c;
}

std::optional<Configuration> decode_source_config(const Derivation& d, const CompiledMachine& cm,
                                                  const ConfigSet& s, const StateAtom& a) {
  const FactSet& f = d.facts();
  auto parent = parent_state_atom(d, a);
  if (!parent) return std::nullopt;
  auto step = d.producing_step(a.atom);
  const auto& info = cm.at(d.steps()[*step].trigger.rule_id);
  if (info.kind != ReductionRule::Kind::step) return std::nullopt;
  auto post = decode_config(s, a);
  if (!post) return std::nullopt;

  const Term& w_new = a.brake();
  const Term& w_old = parent->brake();
  std::vector<Term> sources;
  bool ended = false;
  for (const auto& cell : s.path) {
    std::optional<Term> src;
    for (auto idx : f.with_term_at(pred::F, 1, cell)) {
      const Atom& fa = f.facts()[idx];
      if (fa.args[2] == w_new && fa.args[0] != cell) src = fa.args[0];
    }
    if (!src) {
      ended = true;
      continue;
    }
    if (ended) return std::nullopt;  // a cell without predecessor must be trailing
    sources.push_back(*src);
  }

  Configuration c;
  c.state = parent->state();
  c.head = 0;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i] == parent->term()) c.head = i + 1;
  }
  if (c.head == 0) return std::nullopt;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    std::string letter = i + 1 == c.head ? info.read : post->tape[i];
    if (!f.contains(Atom(letter_predicate(letter), {sources[i], w_old}))) return std::nullopt;
    c.tape.push_back(letter);
  }
  return c;
}

// ---------------------------------------------------------------- scripted simulation

namespace {

Term predicted_null(const CompiledMachine& cm, const std::string& rule_id, const std::string& var, std::size_t step) {
  const auto& ex = cm.rules.at(rule_id).existentials();
  auto it = std::find(ex.begin(), ex.end(), var);
  if (it == ex.end()) throw Error("rule " + rule_id + " has no existential " + var);
  return Term::null("n" + std::to_string(step) + "_" + std::to_string(it - ex.begin()));
}

}  // namespace

ScriptedStep frontier_script(const CompiledMachine& cm, const WildFrontier& wf, const Transition& tr,
                             std::size_t first_step) {
  const Configuration& rho = wf.rho;
  const std::size_t n = rho.n();
  const std::size_t p = rho.head;
  if (wf.cells.size() != n + 1) throw Error("wild frontier needs n+1 cells");
  if (tr.move == Move::left && p < 2) throw Error("left move at the first cell");
  auto x = [&](std::size_t i) { return wf.cells.at(i - 1); };
  const Term& w = wf.brake;

  ScriptedStep out;
  std::vector<Term> xn(n + 3);  // 1-based new cells x'_1..x'_{n+2}
  std::size_t step = first_step;

  const std::string read = rho.at(p);
  const std::string neighbour = tr.move == Move::right ? rho.letter(p + 1) : rho.at(p - 1);
  const std::string id = cm.step_rule_id(rho.state, read, tr, neighbour);
  const auto& info = cm.at(id);
  const Term W = info.fresh_brake ? predicted_null(cm, id, "wn", step) : w;
  if (tr.move == Move::right) {
    out.script.push_back({id, {{"x", x(p)}, {"y", x(p + 1)}, {"w", w}}});
    xn[p] = predicted_null(cm, id, "xn", step);
    xn[p + 1] = predicted_null(cm, id, "yn", step);
  } else {
    out.script.push_back({id, {{"x", x(p)}, {"y", x(p - 1)}, {"w", w}}});
    xn[p] = predicted_null(cm, id, "xn", step);
    xn[p - 1] = predicted_null(cm, id, "yn", step);
  }
  ++step;

  auto copy = [&](const std::string& kind, std::size_t from, std::size_t to) {
    std::string cid = kind + rho.letter(to);
    out.script.push_back({cid, {{"x", x(from)}, {"xn", xn[from]}, {"y", x(to)}, {"w", w}, {"wn", W}}});
    xn[to] = predicted_null(cm, cid, "yn", step);
    ++step;
  };

  if (tr.move == Move::right) {
    for (std::size_t i = 1; i + 1 <= p; ++i) copy("copy_L_", p - i + 1, p - i);
    for (std::size_t i = 1; i + p <= n; ++i) copy("copy_R_", p + i, p + i + 1);
  } else {
    for (std::size_t i = 1; i + 2 <= p; ++i) copy("copy_L_", p - i, p - i - 1);
    for (std::size_t i = 1; i + p <= n + 1; ++i) copy("copy_R_", p - 1 + i, p + i);
  }
  out.script.push_back({"end", {{"x", x(n + 1)}, {"xn", xn[n + 1]}, {"w", w}, {"wn", W}}});
  xn[n + 2] = predicted_null(cm, "end", "yn", step);

  out.next.rho = apply_transition(rho, tr);
  out.next.brake = W;
  out.next.cells.assign(xn.begin() + 1, xn.end());
  return out;
}

}  // namespace chase
