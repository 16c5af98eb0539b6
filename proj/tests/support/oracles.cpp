#include "oracles.hpp"

#include <algorithm>
#include <set>

namespace chase::oracle {

namespace {

void collect_variables(const std::vector<Atom>& atoms, std::set<std::string>& out) {
  for (const auto& a : atoms)
    for (const auto& t : a.args)
      if (t.is_variable()) out.insert(t.name());
}

bool all_present(const std::vector<Atom>& atoms, const Substitution& s, const FactSet& f) {
  for (const auto& a : atoms)
    if (!f.contains(apply_substitution(s, a))) return false;
  return true;
}

// Odometer over domain^vars; calls visit for each complete assignment.
template <typename Visit>
void for_each_assignment(const std::vector<std::string>& vars, const std::vector<Term>& domain, Substitution base,
                         Visit&& visit) {
  if (vars.empty()) {
    visit(base);
    return;
  }
  if (domain.empty()) return;
  std::vector<std::size_t> digit(vars.size(), 0);
  while (true) {
    Substitution s = base;
    for (std::size_t i = 0; i < vars.size(); ++i) s.insert_or_assign(vars[i], domain[digit[i]]);
    if (visit(s)) return;
    std::size_t i = 0;
    while (i < vars.size() && ++digit[i] == domain.size()) digit[i++] = 0;
    if (i == vars.size()) return;
  }
}

}  // namespace

std::vector<Substitution> naive_homomorphisms(const std::vector<Atom>& pattern, const FactSet& f,
                                              const Substitution& partial) {
  std::set<std::string> names;
  collect_variables(pattern, names);
  std::vector<std::string> free;
  for (const auto& n : names)
    if (!partial.contains(n)) free.push_back(n);
  std::set<Substitution> out;
  for_each_assignment(free, f.terms(), partial, [&](const Substitution& s) {
    if (all_present(pattern, s, f)) out.insert(s);
    return false;
  });
  return {out.begin(), out.end()};
}

bool naive_is_obsolete(const Rule& r, const Substitution& sigma, const FactSet& f) {
  Substitution frontier;
  for (const auto& v : r.frontier()) frontier.insert_or_assign(v, sigma.at(v));
  bool found = false;
  for_each_assignment(r.existentials(), f.terms(), frontier, [&](const Substitution& s) {
    found = all_present(r.head(), s, f);
    return found;
  });
  return found;
}

std::vector<std::pair<std::size_t, Substitution>> naive_active(const RuleSet& rules, const FactSet& f) {
  std::vector<std::pair<std::size_t, Substitution>> out;
  for (std::size_t i = 0; i < rules.size(); ++i)
    for (auto& s : naive_homomorphisms(rules[i].body(), f))
      if (!naive_is_obsolete(rules[i], s, f)) out.emplace_back(i, std::move(s));
  return out;
}

bool brute_isomorphic(const FactSet& a, const FactSet& b) {
  if (a.size() != b.size()) return false;
  auto na = a.nulls();
  auto nb = b.nulls();
  if (na.size() != nb.size()) return false;
  std::sort(nb.begin(), nb.end());
  do {
    bool ok = true;
    for (const auto& atom : a) {
      Atom mapped = atom;
      for (auto& t : mapped.args) {
        if (!t.is_null()) continue;
        auto pos = std::find(na.begin(), na.end(), t) - na.begin();
        t = nb[static_cast<std::size_t>(pos)];
      }
      if (!b.contains(mapped)) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(nb.begin(), nb.end()));
  return false;
}

namespace {

struct BfSearch {
  const RuleSet& rules;
  std::size_t max_length;
  BfEnumeration result;
  std::vector<FactSet> fs;
  std::vector<std::vector<std::pair<std::size_t, Substitution>>> loaded;
  std::vector<std::size_t> active;
  std::size_t fresh = 0;

  void push(FactSet f) {
    std::vector<std::pair<std::size_t, Substitution>> l;
    std::size_t n = 0;
    for (std::size_t r = 0; r < rules.size(); ++r) {
      for (auto& s : naive_homomorphisms(rules[r].body(), f)) {
        if (!naive_is_obsolete(rules[r], s, f)) ++n;
        l.emplace_back(r, std::move(s));
      }
    }
    fs.push_back(std::move(f));
    loaded.push_back(std::move(l));
    active.push_back(n);
  }

  void pop() {
    fs.pop_back();
    loaded.pop_back();
    active.pop_back();
  }

  bool respects_last() const {
    const std::size_t i = fs.size();
    for (std::size_t k = 1; k <= i; ++k) {
      if (i - k <= active[k - 1]) continue;
      for (const auto& [r, s] : loaded[k - 1])
        if (!naive_is_obsolete(rules[r], s, fs.back())) return false;
    }
    return true;
  }

  void visit() {
    if (!respects_last()) return;
    ++result.derivations;
    result.longest = std::max(result.longest, fs.size());
    auto next = naive_active(rules, fs.back());
    if (next.empty()) return;
    if (fs.size() == max_length) {
      result.complete = false;
      return;
    }
    for (const auto& [r, s] : next) {
      Substitution full = s;
      for (const auto& v : rules[r].existentials()) full.insert_or_assign(v, Term::null("o" + std::to_string(fresh++)));
      FactSet f = fs.back();
      for (const auto& a : rules[r].head()) f.insert(apply_substitution(full, a));
      push(std::move(f));
      visit();
      pop();
    }
  }
};

}  // namespace

BfEnumeration enumerate_bf(const RuleSet& rules, const FactSet& database, std::size_t max_length) {
  BfSearch s{rules, max_length, {}, {}, {}, {}, 0};
  s.push(database);
  s.visit();
  return s.result;
}

KnowledgeBase random_kb(std::mt19937_64& rng, const RandomKbOptions& o) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto chance = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };

  std::vector<std::size_t> arity(o.predicates);
  for (auto& a : arity) a = 1 + pick(o.max_arity);
  auto pred = [](std::size_t i) { return "P" + std::to_string(i); };
  const std::vector<std::string> vars = {"x", "y", "z"};
  const std::vector<std::string> exvars = {"u", "v"};

  std::vector<Rule> rules;
  while (rules.size() < o.rules) {
    std::size_t head_pred = o.acyclic ? 1 + pick(o.predicates - 1) : pick(o.predicates);
    std::vector<Atom> body;
    std::size_t body_atoms = 1 + pick(2);
    for (std::size_t b = 0; b < body_atoms; ++b) {
      std::size_t p = o.acyclic ? pick(head_pred) : pick(o.predicates);
      Atom a;
      a.predicate = pred(p);
      for (std::size_t k = 0; k < arity[p]; ++k) a.args.push_back(Term::universal(vars[pick(vars.size())]));
      body.push_back(std::move(a));
    }
    std::vector<std::string> body_vars;
    for (const auto& a : body)
      for (const auto& t : a.args)
        if (std::find(body_vars.begin(), body_vars.end(), t.name()) == body_vars.end()) body_vars.push_back(t.name());

    std::vector<Atom> head;
    std::size_t head_atoms = 1 + pick(2);
    for (std::size_t h = 0; h < head_atoms; ++h) {
      std::size_t p = h == 0 ? head_pred : (o.acyclic ? head_pred + pick(o.predicates - head_pred) : pick(o.predicates));
      Atom a;
      a.predicate = pred(p);
      for (std::size_t k = 0; k < arity[p]; ++k) {
        if (chance(o.existential_rate))
          a.args.push_back(Term::existential(exvars[pick(exvars.size())]));
        else
          a.args.push_back(Term::universal(body_vars[pick(body_vars.size())]));
      }
      head.push_back(std::move(a));
    }
    rules.emplace_back("r" + std::to_string(rules.size() + 1), std::move(body), std::move(head));
  }

  FactSet d;
  while (d.size() < o.facts) {
    std::size_t p = pick(o.predicates);
    Atom a;
    a.predicate = pred(p);
    for (std::size_t k = 0; k < arity[p]; ++k) a.args.push_back(Term::constant("c" + std::to_string(pick(o.constants))));
    d.insert(a);
  }
  return KnowledgeBase(RuleSet(std::move(rules)), std::move(d));
}

MatchInstance random_match_instance(std::mt19937_64& rng, std::size_t max_facts) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const std::vector<std::pair<std::string, std::size_t>> sig = {{"A", 2}, {"B", 2}, {"C", 1}, {"D", 3}};
  const std::vector<Term> terms = {Term::constant("a"), Term::constant("b"), Term::constant("c"),
                                   Term::constant("d"), Term::null("n1"), Term::null("n2")};
  const std::vector<std::string> vars = {"x", "y", "z", "w"};

  MatchInstance m;
  std::size_t target = 1 + pick(max_facts);
  for (std::size_t tries = 0; m.facts.size() < target && tries < 10 * max_facts; ++tries) {
    const auto& [p, ar] = sig[pick(sig.size())];
    Atom a;
    a.predicate = p;
    for (std::size_t k = 0; k < ar; ++k) a.args.push_back(terms[pick(terms.size())]);
    m.facts.insert(a);
  }
  std::size_t atoms = 1 + pick(3);
  for (std::size_t i = 0; i < atoms; ++i) {
    const auto& [p, ar] = sig[pick(sig.size())];
    Atom a;
    a.predicate = p;
    for (std::size_t k = 0; k < ar; ++k) {
      if (pick(5) == 0)
        a.args.push_back(terms[pick(4)]);
      else
        a.args.push_back(Term::universal(vars[pick(vars.size())]));
    }
    m.pattern.push_back(std::move(a));
  }
  return m;
}

}  // namespace chase::oracle
