#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chase/model.hpp"

namespace chase {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Rule language:
//   [id ':'] atom (',' atom)* '->' atom (',' atom)* '.'
// `?x` universal variable, `!y` existential variable, lowercase or digit-initial identifiers are
// constants, capitalized identifiers followed by '(' are predicates, `%` comments to end of line.
// Rules without an id get `r<k>` with k their 1-based position in the file.
RuleSet parse_rules(std::string_view text);

// Fact language: atom '.' per fact. Nulls (`_:name`) are accepted only when allow_nulls is set,
// which is how saved chase results are read back.
FactSet parse_facts(std::string_view text, bool allow_nulls = false);

// A single atom, e.g. `HasPart(b,?x)`; used for command-line patterns.
Atom parse_atom(std::string_view text);

// A single ground or variable term in surface syntax.
Term parse_term(std::string_view text);

std::string print_rules(const RuleSet& rules);
// One fact per line in insertion order.
std::string print_facts(const FactSet& facts);
// One fact per line in sorted order.
std::string print_facts_sorted(const FactSet& facts);

}  // namespace chase
