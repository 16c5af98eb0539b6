#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace chase {

// Base for every error the library reports as a domain failure (CLI exit 1).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated structural invariant of a term, atom, rule or knowledge base.
class ModelError : public Error {
 public:
  using Error::Error;
};

enum class TermKind : std::uint8_t { constant, null, variable };
enum class VarKind : std::uint8_t { universal, existential };

class Term {
 public:
  Term() = default;

  static Term constant(std::string name) { return Term(TermKind::constant, std::move(name), VarKind::universal); }
  static Term null(std::string id) { return Term(TermKind::null, std::move(id), VarKind::universal); }
  static Term variable(std::string name, VarKind kind = VarKind::universal) {
    return Term(TermKind::variable, std::move(name), kind);
  }
  static Term universal(std::string name) { return variable(std::move(name), VarKind::universal); }
  static Term existential(std::string name) { return variable(std::move(name), VarKind::existential); }

  TermKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  VarKind var_kind() const { return var_kind_; }

  bool is_constant() const { return kind_ == TermKind::constant; }
  bool is_null() const { return kind_ == TermKind::null; }
  bool is_variable() const { return kind_ == TermKind::variable; }
  bool is_ground() const { return kind_ != TermKind::variable; }

  // Surface syntax: `b`, `_:n0_0`, `?x`, `!y`.
  std::string to_string() const;

  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;

 private:
  Term(TermKind kind, std::string name, VarKind var_kind)
      : kind_(kind), name_(std::move(name)), var_kind_(var_kind) {}

  TermKind kind_ = TermKind::constant;
  std::string name_;
  VarKind var_kind_ = VarKind::universal;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  Atom() = default;
  Atom(std::string pred, std::vector<Term> a) : predicate(std::move(pred)), args(std::move(a)) {}

  std::size_t arity() const { return args.size(); }
  bool is_ground() const;
  std::string to_string() const;

  friend auto operator<=>(const Atom&, const Atom&) = default;
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept;
};
struct AtomHash {
  std::size_t operator()(const Atom& a) const noexcept;
};

// Variable name -> ground term. Keys are bare names (no ?/! sigil).
using Substitution = std::map<std::string, Term>;

std::string to_string(const Substitution& s);

Term apply_substitution(const Substitution& s, const Term& t);
Atom apply_substitution(const Substitution& s, const Atom& a);
std::vector<Atom> apply_substitution(const Substitution& s, std::span<const Atom> atoms);

class Rule {
 public:
  Rule() = default;

  // Validates and classifies variables; throws ModelError on any violated invariant.
  Rule(std::string id, std::vector<Atom> body, std::vector<Atom> head);

  const std::string& id() const { return id_; }
  const std::vector<Atom>& body() const { return body_; }
  const std::vector<Atom>& head() const { return head_; }
  // Universal variables shared by body and head, sorted by name.
  const std::vector<std::string>& frontier() const { return frontier_; }
  // Existential variables in order of first occurrence in the head.
  const std::vector<std::string>& existentials() const { return existentials_; }
  // All universal variables (the body's variables), sorted by name.
  const std::vector<std::string>& universals() const { return universals_; }

  bool is_datalog() const { return existentials_.empty(); }
  std::string to_string() const;

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.id_ == b.id_ && a.body_ == b.body_ && a.head_ == b.head_;
  }

 private:
  std::string id_;
  std::vector<Atom> body_;
  std::vector<Atom> head_;
  std::vector<std::string> frontier_;
  std::vector<std::string> existentials_;
  std::vector<std::string> universals_;
};

// Ordered rule list with id lookup. Rule position is the primary key of the canonical trigger order.
class RuleSet {
 public:
  RuleSet() = default;
  explicit RuleSet(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  const Rule& operator[](std::size_t i) const { return rules_[i]; }
  auto begin() const { return rules_.begin(); }
  auto end() const { return rules_.end(); }

  std::optional<std::size_t> index_of(const std::string& id) const;
  // Throws ModelError for an unknown id.
  const Rule& at(const std::string& id) const;

  // Predicate name -> arity over all rules; throws ModelError on conflicts.
  std::map<std::string, std::size_t> signature() const;

 private:
  std::vector<Rule> rules_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

// Ground atoms in insertion order, indexed by predicate and by (predicate, position, term).
class FactSet {
 public:
  FactSet() = default;
  FactSet(std::initializer_list<Atom> atoms);
  explicit FactSet(std::span<const Atom> atoms);

  // Returns false if the atom was already present. Throws ModelError for non-ground atoms
  // or an arity that conflicts with an earlier fact of the same predicate.
  bool insert(const Atom& atom);

  bool contains(const Atom& atom) const { return lookup_.contains(atom); }
  bool contains_all(std::span<const Atom> atoms) const;
  // Insertion position of the atom.
  std::optional<std::size_t> index_of(const Atom& atom) const;
  std::size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }

  const std::vector<Atom>& facts() const { return facts_; }
  auto begin() const { return facts_.begin(); }
  auto end() const { return facts_.end(); }

  // Indices into facts() of atoms with this predicate (empty span if none).
  std::span<const std::uint32_t> with_predicate(const std::string& pred) const;
  std::span<const std::uint32_t> with_term_at(const std::string& pred, std::size_t pos, const Term& t) const;

  // The first n facts in insertion order.
  FactSet prefix(std::size_t n) const;

  std::vector<Atom> sorted() const;
  std::vector<Term> terms() const;  // distinct, sorted
  std::vector<Term> nulls() const;  // distinct, sorted
  bool has_nulls() const;

  // Set equality, independent of insertion order.
  friend bool operator==(const FactSet& a, const FactSet& b);

  // Consistency of membership and both indexes; used by tests.
  bool indexes_consistent() const;

 private:
  struct PosKey {
    std::string pred;
    std::size_t pos;
    Term term;
    friend bool operator==(const PosKey&, const PosKey&) = default;
  };
  struct PosKeyHash {
    std::size_t operator()(const PosKey& k) const noexcept;
  };

  std::vector<Atom> facts_;
  std::unordered_map<Atom, std::uint32_t, AtomHash> lookup_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> by_pred_;
  std::unordered_map<PosKey, std::vector<std::uint32_t>, PosKeyHash> by_pos_;
  std::unordered_map<std::string, std::size_t> arity_;
};

struct KnowledgeBase {
  RuleSet rules;
  FactSet database;

  KnowledgeBase() = default;
  // Throws ModelError if the database has nulls or predicate arities disagree.
  KnowledgeBase(RuleSet r, FactSet d);
};

// True iff some bijection on nulls (identity on constants) maps a onto b.
bool isomorphic_eq(const FactSet& a, const FactSet& b);

}  // namespace chase
