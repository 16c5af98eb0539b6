#include "chase/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <random>

namespace chase {

std::string to_string(Status s) {
  switch (s) {
    case Status::running:
      return "running";
    case Status::saturated:
      return "saturated";
    case Status::budget_exhausted:
      return "budget_exhausted";
    case Status::script_exhausted:
      return "script_exhausted";
  }
  return "unknown";
}

// ---------------------------------------------------------------- Derivation

Derivation::Derivation(KnowledgeBase kb, NullNaming naming)
    : kb_(std::make_shared<const KnowledgeBase>(std::move(kb))), naming_(naming), facts_(kb_->database) {}

FactSet Derivation::fact_set_at(std::size_t i) const {
  if (i > steps_.size()) throw Error("fact set index " + std::to_string(i) + " out of range");
  if (i == steps_.size()) return facts_;
  return facts_.prefix(steps_[i].facts_before);
}

std::optional<std::size_t> Derivation::producing_step(const Atom& fact) const {
  auto it = produced_by_.find(fact);
  if (it == produced_by_.end()) return std::nullopt;
  return it->second;
}

std::vector<Atom> Derivation::support_of_step(std::size_t step) const {
  return support(rules(), steps_.at(step).trigger);
}

bool Derivation::fired(const Trigger& t) const { return fired_.contains(t); }

void Derivation::append(const Trigger& t, Substitution extension, std::vector<Atom> output) {
  Step s;
  s.index = steps_.size();
  s.trigger = t;
  s.extension = std::move(extension);
  s.facts_before = facts_.size();
  for (const auto& a : output) {
    if (facts_.insert(a)) {
      s.added.push_back(a);
      produced_by_.emplace(a, s.index);
    }
  }
  s.output = std::move(output);
  fired_.insert(t);
  steps_.push_back(std::move(s));
}

// ---------------------------------------------------------------- steps

namespace {

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= 0xff;
  h *= 0x100000001b3ULL;
  return h;
}

Substitution extend_with_nulls(const RuleSet& rules, const Trigger& t, std::size_t step, NullNaming naming) {
  const Rule& r = rules[t.rule_index];
  Substitution ext;
  for (std::size_t k = 0; k < r.existentials().size(); ++k)
    ext.emplace(r.existentials()[k], make_null(rules, t, r.existentials()[k], k, step, naming));
  return ext;
}

std::vector<Atom> instantiate_head(const RuleSet& rules, const Trigger& t, const Substitution& ext) {
  Substitution full = t.sigma;
  for (const auto& [k, v] : ext) full.insert_or_assign(k, v);
  return apply_substitution(full, rules[t.rule_index].head());
}

void require_active(const RuleSet& rules, const Trigger& t, const FactSet& f) {
  if (!is_loaded(rules, t, f)) throw ChaseError(ChaseError::Kind::not_loaded, "trigger " + t.to_string() + " is not loaded");
  if (is_obsolete(rules, t, f))
    throw ChaseError(ChaseError::Kind::obsolete, "trigger " + t.to_string() + " is obsolete");
}

Trigger normalized(const RuleSet& rules, const Trigger& t) {
  auto idx = rules.index_of(t.rule_id);
  if (!idx) throw ModelError("unknown rule id " + t.rule_id);
  Trigger out = t;
  out.rule_index = *idx;
  return out;
}

}  // namespace

Term make_null(const RuleSet& rules, const Trigger& t, const std::string& var, std::size_t position,
               std::size_t step, NullNaming naming) {
  if (naming == NullNaming::canonical) return Term::null("n" + std::to_string(step) + "_" + std::to_string(position));
  const Rule& r = rules[t.rule_index];
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(h, r.id());
  h = fnv1a(h, var);
  for (const auto& v : r.frontier()) {
    h = fnv1a(h, v);
    h = fnv1a(h, t.sigma.at(v).to_string());
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return Term::null("sk_" + r.id() + "_" + var + "_" + buf);
}

std::vector<Atom> trigger_output(const RuleSet& rules, const Trigger& t, const FactSet& f, std::size_t step,
                                 NullNaming naming) {
  Trigger n = normalized(rules, t);
  require_active(rules, n, f);
  return instantiate_head(rules, n, extend_with_nulls(rules, n, step, naming));
}

void chase_step_inplace(Derivation& d, const Trigger& t) {
  Trigger n = normalized(d.rules(), t);
  require_active(d.rules(), n, d.facts());
  auto ext = extend_with_nulls(d.rules(), n, d.steps().size(), d.naming());
  auto out = instantiate_head(d.rules(), n, ext);
  d.append(n, std::move(ext), std::move(out));
}

Derivation chase_step(Derivation d, const Trigger& t) {
  chase_step_inplace(d, t);
  return d;
}

// ---------------------------------------------------------------- strategies

std::string TriggerDescriptor::to_string() const {
  std::string out = rule_id;
  for (const auto& [k, v] : bindings) out += " " + k + "=" + v.to_string();
  return out;
}

namespace {

enum class Mode { restricted, oblivious };

bool eligible(const Derivation& d, const Trigger& t, Mode mode) {
  if (mode == Mode::restricted) return !is_obsolete(d.rules(), t, d.facts());
  return !d.fired(t);
}

std::vector<Trigger> candidates(const Derivation& d, Mode mode) {
  if (mode == Mode::restricted) return active_triggers(d.rules(), d.facts());
  std::vector<Trigger> out;
  for (auto& t : loaded_triggers(d.rules(), d.facts()))
    if (!d.fired(t)) out.push_back(std::move(t));
  return out;
}

std::optional<Trigger> resolve(const Derivation& d, const TriggerDescriptor& desc, Mode mode) {
  auto idx = d.rules().index_of(desc.rule_id);
  if (!idx) throw ChaseError(ChaseError::Kind::script_unresolved, "script names unknown rule " + desc.rule_id);
  const Rule& r = d.rules()[*idx];
  for (const auto& [var, _] : desc.bindings) {
    if (!std::binary_search(r.universals().begin(), r.universals().end(), var))
      throw ChaseError(ChaseError::Kind::script_unresolved,
                       "script binds " + var + ", which is not a universal variable of rule " + r.id());
  }
  for (auto& s : find_homomorphisms(r.body(), d.facts(), desc.bindings)) {
    Trigger t{*idx, r.id(), std::move(s)};
    if (eligible(d, t, mode)) return t;
  }
  return std::nullopt;
}

class Selector {
 public:
  virtual ~Selector() = default;
  virtual std::optional<Trigger> next(const Derivation& d) = 0;
};

class FifoSelector : public Selector {
 public:
  explicit FifoSelector(Mode mode, bool lifo) : mode_(mode), lifo_(lifo) {}

  std::optional<Trigger> next(const Derivation& d) override {
    // Fresh triggers enter the queue ordered by their most recently derived support atom.
    std::vector<std::pair<std::size_t, Trigger>> fresh;
    for (auto& t : candidates(d, mode_)) {
      if (!seen_.insert(t).second) continue;
      std::size_t recency = 0;
      for (const auto& a : support(d.rules(), t)) recency = std::max(recency, *d.facts().index_of(a));
      fresh.emplace_back(recency, std::move(t));
    }
    std::stable_sort(fresh.begin(), fresh.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [_, t] : fresh) queue_.push_back(std::move(t));
    while (!queue_.empty()) {
      Trigger t;
      if (lifo_) {
        t = std::move(queue_.back());
        queue_.pop_back();
      } else {
        t = std::move(queue_.front());
        queue_.pop_front();
      }
      if (eligible(d, t, mode_)) return t;
    }
    return std::nullopt;
  }

 private:
  Mode mode_;
  bool lifo_;
  std::deque<Trigger> queue_;
  std::set<Trigger> seen_;
};

class RandomSelector : public Selector {
 public:
  RandomSelector(Mode mode, std::uint64_t seed) : mode_(mode), rng_(seed) {}

  std::optional<Trigger> next(const Derivation& d) override {
    auto c = candidates(d, mode_);
    if (c.empty()) return std::nullopt;
    return c[static_cast<std::size_t>(rng_() % c.size())];
  }

 private:
  Mode mode_;
  std::mt19937_64 rng_;
};

class ScriptSelector : public Selector {
 public:
  ScriptSelector(Mode mode, std::vector<TriggerDescriptor> choices) : mode_(mode), choices_(std::move(choices)) {}

  std::optional<Trigger> next(const Derivation& d) override {
    if (pos_ == choices_.size()) return std::nullopt;
    const auto& desc = choices_[pos_];
    auto t = resolve(d, desc, mode_);
    if (!t)
      throw ChaseError(ChaseError::Kind::script_unresolved,
                       "script entry " + std::to_string(pos_ + 1) + " (" + desc.to_string() +
                           ") matches no applicable trigger at step " + std::to_string(d.steps().size()));
    ++pos_;
    return t;
  }

 private:
  Mode mode_;
  std::vector<TriggerDescriptor> choices_;
  std::size_t pos_ = 0;
};

std::unique_ptr<Selector> make_selector(const Strategy& s, Mode mode) {
  if (std::holds_alternative<Fifo>(s)) return std::make_unique<FifoSelector>(mode, false);
  if (std::holds_alternative<Dfs>(s)) return std::make_unique<FifoSelector>(mode, true);
  if (const auto* r = std::get_if<Random>(&s)) return std::make_unique<RandomSelector>(mode, r->seed);
  return std::make_unique<ScriptSelector>(mode, std::get<Script>(s).choices);
}

void apply(Derivation& d, const Trigger& t, Mode mode) {
  if (mode == Mode::restricted) {
    chase_step_inplace(d, t);
    return;
  }
  if (!is_loaded(d.rules(), t, d.facts()))
    throw ChaseError(ChaseError::Kind::not_loaded, "trigger " + t.to_string() + " is not loaded");
  if (d.fired(t)) throw ChaseError(ChaseError::Kind::already_fired, "trigger " + t.to_string() + " already fired");
  auto ext = extend_with_nulls(d.rules(), t, d.steps().size(), d.naming());
  auto out = instantiate_head(d.rules(), t, ext);
  d.append(t, std::move(ext), std::move(out));
}

Derivation drive(Derivation d, const Strategy& s, std::size_t max_steps, Mode mode) {
  auto sel = make_selector(s, mode);
  bool is_script = std::holds_alternative<Script>(s);
  d.set_status(Status::running);
  for (std::size_t taken = 0;; ++taken) {
    if (taken == max_steps) {
      d.set_status(candidates(d, mode).empty() ? Status::saturated : Status::budget_exhausted);
      break;
    }
    auto t = sel->next(d);
    if (!t) {
      bool done = candidates(d, mode).empty();
      d.set_status(done ? Status::saturated : (is_script ? Status::script_exhausted : Status::running));
      break;
    }
    apply(d, *t, mode);
  }
  return d;
}

}  // namespace

std::optional<Trigger> resolve_descriptor(const Derivation& d, const TriggerDescriptor& desc) {
  return resolve(d, desc, d.naming() == NullNaming::skolem ? Mode::oblivious : Mode::restricted);
}

std::string strategy_name(const Strategy& s) {
  if (std::holds_alternative<Fifo>(s)) return "fifo";
  if (std::holds_alternative<Dfs>(s)) return "dfs";
  if (const auto* r = std::get_if<Random>(&s)) return "random(" + std::to_string(r->seed) + ")";
  return "script";
}

Derivation run_chase(const KnowledgeBase& kb, const Strategy& s, std::size_t max_steps) {
  return drive(Derivation(kb, NullNaming::canonical), s, max_steps, Mode::restricted);
}

Derivation continue_chase(Derivation d, const Strategy& s, std::size_t max_steps) {
  Mode mode = d.naming() == NullNaming::skolem ? Mode::oblivious : Mode::restricted;
  return drive(std::move(d), s, max_steps, mode);
}

Derivation run_oblivious(const KnowledgeBase& kb, const Strategy& s, std::size_t max_steps) {
  return drive(Derivation(kb, NullNaming::skolem), s, max_steps, Mode::oblivious);
}

// ---------------------------------------------------------------- (†)

std::optional<DaggerViolation> check_dagger_violation(const Derivation& d) {
  const std::size_t n = d.length();
  std::vector<FactSet> fs;
  fs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) fs.push_back(d.fact_set_at(i));
  std::vector<std::vector<Trigger>> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = active_triggers(d.rules(), fs[i]);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (i - k <= active[k].size()) continue;
      for (const auto& t : active[k]) {
        if (!is_obsolete(d.rules(), t, fs[i])) return DaggerViolation{i, k, active[k].size(), t};
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> validate_derivation(const Derivation& d) {
  FactSet f = d.database();
  for (const auto& s : d.steps()) {
    std::string where = "step " + std::to_string(s.index) + ": ";
    if (s.facts_before != f.size()) return where + "fact-set size mismatch";
    if (!is_loaded(d.rules(), s.trigger, f)) return where + "trigger not loaded";
    if (d.naming() == NullNaming::canonical && is_obsolete(d.rules(), s.trigger, f))
      return where + "trigger obsolete";
    auto terms = f.terms();
    for (const auto& [_, null] : s.extension) {
      if (std::binary_search(terms.begin(), terms.end(), null) && d.naming() == NullNaming::canonical)
        return where + "null " + null.to_string() + " is not fresh";
    }
    for (const auto& a : s.output) f.insert(a);
  }
  if (!(f == d.facts())) return std::string("final fact set differs from replay");
  return std::nullopt;
}

}  // namespace chase
