#include "chase/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace chase {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

std::string Term::to_string() const {
  switch (kind_) {
    case TermKind::constant:
      return name_;
    case TermKind::null:
      return "_:" + name_;
    case TermKind::variable:
      return (var_kind_ == VarKind::universal ? "?" : "!") + name_;
  }
  return name_;
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
  std::size_t h = std::hash<std::string>{}(t.name());
  h = mix(h, static_cast<std::size_t>(t.kind()));
  return mix(h, static_cast<std::size_t>(t.var_kind()));
}

std::size_t AtomHash::operator()(const Atom& a) const noexcept {
  std::size_t h = std::hash<std::string>{}(a.predicate);
  for (const auto& t : a.args) h = mix(h, TermHash{}(t));
  return h;
}

bool Atom::is_ground() const {
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

std::string Atom::to_string() const {
  std::string out = predicate + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i].to_string();
  }
  return out + ")";
}

std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : s) {
    if (!first) out += ", ";
    first = false;
    out += k + "->" + v.to_string();
  }
  return out + "}";
}

Term apply_substitution(const Substitution& s, const Term& t) {
  if (!t.is_variable()) return t;
  auto it = s.find(t.name());
  return it == s.end() ? t : it->second;
}

Atom apply_substitution(const Substitution& s, const Atom& a) {
  Atom out;
  out.predicate = a.predicate;
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(apply_substitution(s, t));
  return out;
}

std::vector<Atom> apply_substitution(const Substitution& s, std::span<const Atom> atoms) {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(apply_substitution(s, a));
  return out;
}

// ---------------------------------------------------------------- Rule

Rule::Rule(std::string id, std::vector<Atom> body, std::vector<Atom> head)
    : id_(std::move(id)), body_(std::move(body)), head_(std::move(head)) {
  if (id_.empty()) throw ModelError("rule with empty id");
  if (head_.empty()) throw ModelError("rule " + id_ + ": head is empty");

  std::set<std::string> body_vars;
  for (const auto& a : body_) {
    for (const auto& t : a.args) {
      if (t.is_null()) throw ModelError("rule " + id_ + ": null " + t.to_string() + " in body");
      if (!t.is_variable()) continue;
      if (t.var_kind() == VarKind::existential)
        throw ModelError("rule " + id_ + ": existential variable " + t.to_string() + " in body");
      body_vars.insert(t.name());
    }
  }

  std::set<std::string> frontier;
  std::set<std::string> seen_ex;
  for (const auto& a : head_) {
    for (const auto& t : a.args) {
      if (t.is_null()) throw ModelError("rule " + id_ + ": null " + t.to_string() + " in head");
      if (!t.is_variable()) continue;
      if (t.var_kind() == VarKind::universal) {
        if (!body_vars.contains(t.name()))
          throw ModelError("rule " + id_ + ": head variable " + t.to_string() +
                           " does not occur in the body and is not existential");
        frontier.insert(t.name());
      } else {
        if (body_vars.contains(t.name()))
          throw ModelError("rule " + id_ + ": variable " + t.name() + " is both universal and existential");
        if (seen_ex.insert(t.name()).second) existentials_.push_back(t.name());
      }
    }
  }
  frontier_.assign(frontier.begin(), frontier.end());
  universals_.assign(body_vars.begin(), body_vars.end());

  std::map<std::string, std::size_t> arity;
  auto check = [&](const Atom& a) {
    auto [it, inserted] = arity.emplace(a.predicate, a.arity());
    if (!inserted && it->second != a.arity())
      throw ModelError("rule " + id_ + ": predicate " + a.predicate + " used with arities " +
                       std::to_string(it->second) + " and " + std::to_string(a.arity()));
  };
  for (const auto& a : body_) check(a);
  for (const auto& a : head_) check(a);
}

std::string Rule::to_string() const {
  std::string out = id_ + ": ";
  for (std::size_t i = 0; i < body_.size(); ++i) {
    if (i) out += ", ";
    out += body_[i].to_string();
  }
  out += body_.empty() ? "-> " : " -> ";
  for (std::size_t i = 0; i < head_.size(); ++i) {
    if (i) out += ", ";
    out += head_[i].to_string();
  }
  return out + " .";
}

// ---------------------------------------------------------------- RuleSet

RuleSet::RuleSet(std::vector<Rule> rules) : rules_(std::move(rules)) {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (!by_id_.emplace(rules_[i].id(), i).second) throw ModelError("duplicate rule id " + rules_[i].id());
  }
  (void)signature();
}

std::optional<std::size_t> RuleSet::index_of(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

const Rule& RuleSet::at(const std::string& id) const {
  auto idx = index_of(id);
  if (!idx) throw ModelError("unknown rule id " + id);
  return rules_[*idx];
}

std::map<std::string, std::size_t> RuleSet::signature() const {
  std::map<std::string, std::size_t> sig;
  for (const auto& r : rules_) {
    for (const auto* part : {&r.body(), &r.head()}) {
      for (const auto& a : *part) {
        auto [it, inserted] = sig.emplace(a.predicate, a.arity());
        if (!inserted && it->second != a.arity())
          throw ModelError("predicate " + a.predicate + " used with arities " + std::to_string(it->second) +
                           " and " + std::to_string(a.arity()));
      }
    }
  }
  return sig;
}

// ---------------------------------------------------------------- FactSet

std::size_t FactSet::PosKeyHash::operator()(const PosKey& k) const noexcept {
  return mix(mix(std::hash<std::string>{}(k.pred), k.pos), TermHash{}(k.term));
}

FactSet::FactSet(std::initializer_list<Atom> atoms) {
  for (const auto& a : atoms) insert(a);
}

FactSet::FactSet(std::span<const Atom> atoms) {
  for (const auto& a : atoms) insert(a);
}

bool FactSet::insert(const Atom& atom) {
  if (!atom.is_ground()) throw ModelError("fact " + atom.to_string() + " contains a variable");
  if (lookup_.contains(atom)) return false;
  auto [it, inserted] = arity_.emplace(atom.predicate, atom.arity());
  if (!inserted && it->second != atom.arity())
    throw ModelError("predicate " + atom.predicate + " used with arities " + std::to_string(it->second) + " and " +
                     std::to_string(atom.arity()));
  auto idx = static_cast<std::uint32_t>(facts_.size());
  facts_.push_back(atom);
  lookup_.emplace(atom, idx);
  by_pred_[atom.predicate].push_back(idx);
  for (std::size_t i = 0; i < atom.args.size(); ++i) by_pos_[PosKey{atom.predicate, i, atom.args[i]}].push_back(idx);
  return true;
}

std::optional<std::size_t> FactSet::index_of(const Atom& atom) const {
  auto it = lookup_.find(atom);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

bool FactSet::contains_all(std::span<const Atom> atoms) const {
  return std::all_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return contains(a); });
}

std::span<const std::uint32_t> FactSet::with_predicate(const std::string& pred) const {
  auto it = by_pred_.find(pred);
  if (it == by_pred_.end()) return {};
  return it->second;
}

std::span<const std::uint32_t> FactSet::with_term_at(const std::string& pred, std::size_t pos, const Term& t) const {
  auto it = by_pos_.find(PosKey{pred, pos, t});
  if (it == by_pos_.end()) return {};
  return it->second;
}

FactSet FactSet::prefix(std::size_t n) const {
  FactSet out;
  n = std::min(n, facts_.size());
  for (std::size_t i = 0; i < n; ++i) out.insert(facts_[i]);
  return out;
}

std::vector<Atom> FactSet::sorted() const {
  std::vector<Atom> out = facts_;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Term> FactSet::terms() const {
  std::set<Term> s;
  for (const auto& a : facts_) s.insert(a.args.begin(), a.args.end());
  return {s.begin(), s.end()};
}

std::vector<Term> FactSet::nulls() const {
  std::set<Term> s;
  for (const auto& a : facts_)
    for (const auto& t : a.args)
      if (t.is_null()) s.insert(t);
  return {s.begin(), s.end()};
}

bool FactSet::has_nulls() const {
  return std::any_of(facts_.begin(), facts_.end(), [](const Atom& a) {
    return std::any_of(a.args.begin(), a.args.end(), [](const Term& t) { return t.is_null(); });
  });
}

bool operator==(const FactSet& a, const FactSet& b) {
  if (a.size() != b.size()) return false;
  return std::all_of(a.begin(), a.end(), [&](const Atom& x) { return b.contains(x); });
}

bool FactSet::indexes_consistent() const {
  if (lookup_.size() != facts_.size()) return false;
  for (std::size_t i = 0; i < facts_.size(); ++i) {
    auto it = lookup_.find(facts_[i]);
    if (it == lookup_.end() || it->second != i) return false;
  }
  std::size_t pred_entries = 0;
  for (const auto& [pred, idxs] : by_pred_) {
    for (auto i : idxs) {
      if (i >= facts_.size() || facts_[i].predicate != pred) return false;
    }
    pred_entries += idxs.size();
  }
  if (pred_entries != facts_.size()) return false;
  std::size_t pos_entries = 0;
  std::size_t expected_pos = 0;
  for (const auto& a : facts_) expected_pos += a.arity();
  for (const auto& [key, idxs] : by_pos_) {
    for (auto i : idxs) {
      if (i >= facts_.size()) return false;
      const auto& a = facts_[i];
      if (a.predicate != key.pred || key.pos >= a.arity() || a.args[key.pos] != key.term) return false;
    }
    pos_entries += idxs.size();
  }
  return pos_entries == expected_pos;
}

// ---------------------------------------------------------------- KnowledgeBase

KnowledgeBase::KnowledgeBase(RuleSet r, FactSet d) : rules(std::move(r)), database(std::move(d)) {
  if (database.has_nulls()) throw ModelError("database contains nulls");
  auto sig = rules.signature();
  for (const auto& a : database) {
    auto it = sig.find(a.predicate);
    if (it != sig.end() && it->second != a.arity())
      throw ModelError("predicate " + a.predicate + " has arity " + std::to_string(it->second) +
                       " in the rules but " + std::to_string(a.arity()) + " in the database");
  }
}

// ---------------------------------------------------------------- isomorphism

namespace {

// Occurrence profile of a null: sorted list of (predicate, position) pairs.
using Profile = std::vector<std::pair<std::string, std::size_t>>;

std::map<Term, Profile> profiles(const FactSet& f) {
  std::map<Term, Profile> out;
  for (const auto& a : f)
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (a.args[i].is_null()) out[a.args[i]].emplace_back(a.predicate, i);
  for (auto& [_, p] : out) std::sort(p.begin(), p.end());
  return out;
}

struct IsoSearch {
  const FactSet& a;
  const FactSet& b;
  std::map<Term, Profile> pa;
  std::map<Term, Profile> pb;
  std::vector<const Atom*> order;  // atoms of a containing nulls
  std::map<Term, Term> fwd;
  std::map<Term, Term> bwd;

  bool bind(const Term& x, const Term& y, std::vector<Term>& added) {
    auto f = fwd.find(x);
    if (f != fwd.end()) return f->second == y;
    if (bwd.contains(y)) return false;
    if (pa.at(x) != pb.at(y)) return false;
    fwd.emplace(x, y);
    bwd.emplace(y, x);
    added.push_back(x);
    return true;
  }

  void unbind(const std::vector<Term>& added) {
    for (const auto& x : added) {
      bwd.erase(fwd.at(x));
      fwd.erase(x);
    }
  }

  bool solve(std::size_t i) {
    if (i == order.size()) return true;
    const Atom& src = *order[i];
    for (auto idx : b.with_predicate(src.predicate)) {
      const Atom& dst = b.facts()[idx];
      std::vector<Term> added;
      bool ok = true;
      for (std::size_t k = 0; k < src.args.size() && ok; ++k) {
        const Term& s = src.args[k];
        const Term& d = dst.args[k];
        if (s.is_null()) {
          ok = d.is_null() && bind(s, d, added);
        } else {
          ok = s == d;
        }
      }
      if (ok && solve(i + 1)) return true;
      unbind(added);
    }
    return false;
  }
};

}  // namespace

bool isomorphic_eq(const FactSet& a, const FactSet& b) {
  if (a.size() != b.size()) return false;
  IsoSearch s{a, b, profiles(a), profiles(b), {}, {}, {}};
  if (s.pa.size() != s.pb.size()) return false;

  std::multiset<Profile> ma;
  std::multiset<Profile> mb;
  for (const auto& [_, p] : s.pa) ma.insert(p);
  for (const auto& [_, p] : s.pb) mb.insert(p);
  if (ma != mb) return false;

  for (const auto& atom : a) {
    bool has_null = std::any_of(atom.args.begin(), atom.args.end(), [](const Term& t) { return t.is_null(); });
    if (!has_null) {
      if (!b.contains(atom)) return false;
    } else {
      s.order.push_back(&atom);
    }
  }
  // Most constrained atoms first: those sharing nulls with earlier atoms get bound quickly.
  std::stable_sort(s.order.begin(), s.order.end(), [&](const Atom* x, const Atom* y) {
    return b.with_predicate(x->predicate).size() < b.with_predicate(y->predicate).size();
  });
  // Since the map is injective on nulls and |a| = |b|, a full image of a's null atoms inside b,
  // together with identical ground atoms, means the image is exactly b.
  return s.solve(0);
}

}  // namespace chase
