#include "chase/matching.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace chase {

namespace {

// Pattern compiled to variable slots; bindings point into the fact set or into `partial`.
class Matcher {
 public:
  Matcher(std::span<const Atom> pattern, const FactSet& f, const Substitution& partial)
      : pattern_(pattern), f_(f), partial_(partial) {
    slots_.resize(pattern.size());
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      for (const auto& t : pattern[i].args) {
        if (!t.is_variable()) {
          slots_[i].push_back(-1);
          continue;
        }
        auto it = std::find(names_.begin(), names_.end(), t.name());
        if (it == names_.end()) {
          names_.push_back(t.name());
          slots_[i].push_back(static_cast<int>(names_.size() - 1));
        } else {
          slots_[i].push_back(static_cast<int>(it - names_.begin()));
        }
      }
    }
    binding_.assign(names_.size(), nullptr);
    for (std::size_t v = 0; v < names_.size(); ++v) {
      auto it = partial.find(names_[v]);
      if (it != partial.end()) binding_[v] = &it->second;
    }
    done_.assign(pattern.size(), false);
  }

  // Calls emit for every match; stops early when emit returns false.
  void run(const std::function<bool(const std::vector<const Term*>&)>& emit) {
    emit_ = &emit;
    stop_ = false;
    search(0);
  }

  Substitution to_substitution(const std::vector<const Term*>& b) const {
    Substitution s = partial_;
    for (std::size_t v = 0; v < names_.size(); ++v) s.insert_or_assign(names_[v], *b[v]);
    return s;
  }

 private:
  const Term* bound_term(std::size_t atom, std::size_t pos) const {
    int slot = slots_[atom][pos];
    if (slot < 0) return &pattern_[atom].args[pos];
    return binding_[static_cast<std::size_t>(slot)];
  }

  std::span<const std::uint32_t> candidates(std::size_t atom) const {
    const Atom& a = pattern_[atom];
    std::span<const std::uint32_t> best = f_.with_predicate(a.predicate);
    for (std::size_t pos = 0; pos < a.args.size(); ++pos) {
      const Term* t = bound_term(atom, pos);
      if (!t) continue;
      auto c = f_.with_term_at(a.predicate, pos, *t);
      if (c.size() < best.size()) best = c;
      if (best.empty()) break;
    }
    return best;
  }

  void search(std::size_t depth) {
    if (stop_) return;
    if (depth == pattern_.size()) {
      if (!(*emit_)(binding_)) stop_ = true;
      return;
    }
    std::size_t pick = 0;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::span<const std::uint32_t> cands;
    for (std::size_t i = 0; i < pattern_.size(); ++i) {
      if (done_[i]) continue;
      auto c = candidates(i);
      if (c.size() < best) {
        best = c.size();
        pick = i;
        cands = c;
        if (best == 0) return;
      }
    }
    const Atom& a = pattern_[pick];
    done_[pick] = true;
    std::vector<int> newly;
    for (auto idx : cands) {
      const Atom& fact = f_.facts()[idx];
      if (fact.arity() != a.arity()) continue;
      bool ok = true;
      newly.clear();
      for (std::size_t pos = 0; pos < a.args.size() && ok; ++pos) {
        int slot = slots_[pick][pos];
        if (slot < 0) {
          ok = a.args[pos] == fact.args[pos];
        } else if (binding_[static_cast<std::size_t>(slot)]) {
          ok = *binding_[static_cast<std::size_t>(slot)] == fact.args[pos];
        } else {
          binding_[static_cast<std::size_t>(slot)] = &fact.args[pos];
          newly.push_back(slot);
        }
      }
      if (ok) search(depth + 1);
      for (int s : newly) binding_[static_cast<std::size_t>(s)] = nullptr;
      if (stop_) break;
    }
    done_[pick] = false;
  }

  std::span<const Atom> pattern_;
  const FactSet& f_;
  const Substitution& partial_;
  std::vector<std::string> names_;
  std::vector<std::vector<int>> slots_;
  std::vector<const Term*> binding_;
  std::vector<bool> done_;
  const std::function<bool(const std::vector<const Term*>&)>* emit_ = nullptr;
  bool stop_ = false;
};

const Rule& rule_of(const RuleSet& rules, const Trigger& t) {
  auto idx = rules.index_of(t.rule_id);
  if (!idx) throw ModelError("unknown rule id " + t.rule_id);
  return rules[*idx];
}

}  // namespace

std::string Trigger::to_string() const {
  std::string out = rule_id;
  for (const auto& [k, v] : sigma) out += " " + k + "=" + v.to_string();
  return out;
}

std::vector<Substitution> find_homomorphisms(std::span<const Atom> pattern, const FactSet& f,
                                             const Substitution& partial) {
  Matcher m(pattern, f, partial);
  std::vector<Substitution> out;
  m.run([&](const std::vector<const Term*>& b) {
    out.push_back(m.to_substitution(b));
    return true;
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool has_homomorphism(std::span<const Atom> pattern, const FactSet& f, const Substitution& partial) {
  Matcher m(pattern, f, partial);
  bool found = false;
  m.run([&](const std::vector<const Term*>&) {
    found = true;
    return false;
  });
  return found;
}

Trigger make_trigger(const RuleSet& rules, const std::string& rule_id, Substitution sigma) {
  auto idx = rules.index_of(rule_id);
  if (!idx) throw ModelError("unknown rule id " + rule_id);
  return Trigger{*idx, rule_id, std::move(sigma)};
}

std::vector<Atom> support(const RuleSet& rules, const Trigger& t) {
  return apply_substitution(t.sigma, rule_of(rules, t).body());
}

bool is_loaded(const RuleSet& rules, const Trigger& t, const FactSet& f) {
  const Rule& r = rule_of(rules, t);
  for (const auto& a : r.body())
    if (!f.contains(apply_substitution(t.sigma, a))) return false;
  return true;
}

bool is_obsolete(const RuleSet& rules, const Trigger& t, const FactSet& f) {
  const Rule& r = rule_of(rules, t);
  Substitution frontier;
  for (const auto& v : r.frontier()) {
    auto it = t.sigma.find(v);
    if (it != t.sigma.end()) frontier.emplace(v, it->second);
  }
  return has_homomorphism(r.head(), f, frontier);
}

std::vector<Trigger> loaded_triggers(const RuleSet& rules, const FactSet& f) {
  std::vector<Trigger> out;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (auto& s : find_homomorphisms(rules[i].body(), f)) out.push_back(Trigger{i, rules[i].id(), std::move(s)});
  }
  return out;
}

std::vector<Trigger> active_triggers(const RuleSet& rules, const FactSet& f) {
  std::vector<Trigger> out;
  for (auto& t : loaded_triggers(rules, f))
    if (!is_obsolete(rules, t, f)) out.push_back(std::move(t));
  return out;
}

std::size_t count_active(const RuleSet& rules, const FactSet& f) { return active_triggers(rules, f).size(); }

}  // namespace chase
