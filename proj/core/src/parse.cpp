#include "chase/parse.hpp"

#include <cctype>
#include <map>

namespace chase {

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool peek_arrow() {
    skip_space();
    return text_.substr(pos_, 2) == "->";
  }

  void expect(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) fail("expected '" + std::string(token) + "'");
    for (std::size_t i = 0; i < token.size(); ++i) advance();
  }

  bool accept(char c) {
    if (peek() != c) return false;
    advance();
    return true;
  }

  std::string identifier() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  // Peeks the identifier at the cursor and the first non-space character after it.
  std::pair<std::string, char> lookahead_identifier() {
    skip_space();
    std::size_t p = pos_;
    while (p < text_.size() && ident_char(text_[p])) ++p;
    std::string id(text_.substr(pos_, p - pos_));
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    return {id, p < text_.size() ? text_[p] : '\0'};
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, col_, msg); }

  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

Term read_term(Lexer& lx, bool allow_vars, bool allow_nulls) {
  char c = lx.peek();
  if (c == '?' || c == '!') {
    if (!allow_vars) lx.fail("variable not allowed here");
    lx.expect(std::string_view(&c, 1));
    auto name = lx.identifier();
    return Term::variable(name, c == '?' ? VarKind::universal : VarKind::existential);
  }
  if (c == '_') {
    auto [id, next] = lx.lookahead_identifier();
    if (id == "_" && next == ':') {
      if (!allow_nulls) lx.fail("null not allowed here");
      lx.expect("_");
      lx.expect(":");
      return Term::null(lx.identifier());
    }
  }
  if (std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c))) {
    return Term::constant(lx.identifier());
  }
  lx.fail("expected term");
}

Atom read_atom(Lexer& lx, bool allow_vars, bool allow_nulls) {
  char c = lx.peek();
  if (!std::isupper(static_cast<unsigned char>(c))) lx.fail("expected predicate (capitalized identifier)");
  Atom a;
  a.predicate = lx.identifier();
  lx.expect("(");
  if (!lx.accept(')')) {
    do {
      a.args.push_back(read_term(lx, allow_vars, allow_nulls));
    } while (lx.accept(','));
    lx.expect(")");
  }
  return a;
}

std::vector<Atom> read_conjunction(Lexer& lx, bool allow_vars, bool allow_nulls) {
  std::vector<Atom> out;
  out.push_back(read_atom(lx, allow_vars, allow_nulls));
  while (lx.accept(',')) out.push_back(read_atom(lx, allow_vars, allow_nulls));
  return out;
}

class ArityTracker {
 public:
  void check(Lexer& lx, const Atom& a) {
    auto [it, inserted] = arity_.emplace(a.predicate, a.arity());
    if (!inserted && it->second != a.arity())
      lx.fail("predicate " + a.predicate + " used with arity " + std::to_string(a.arity()) + ", earlier with " +
              std::to_string(it->second));
  }

 private:
  std::map<std::string, std::size_t> arity_;
};

}  // namespace

RuleSet parse_rules(std::string_view text) {
  Lexer lx(text);
  ArityTracker arity;
  std::vector<Rule> rules;
  while (!lx.at_end()) {
    std::size_t line = lx.line();
    std::size_t col = lx.column();
    std::string id;
    if (!lx.peek_arrow()) {
      auto [word, next] = lx.lookahead_identifier();
      if (!word.empty() && next == ':') {
        id = lx.identifier();
        lx.expect(":");
      }
    }
    std::vector<Atom> body;
    if (!lx.peek_arrow()) body = read_conjunction(lx, true, false);
    lx.expect("->");
    auto head = read_conjunction(lx, true, false);
    lx.expect(".");
    for (const auto& a : body) arity.check(lx, a);
    for (const auto& a : head) arity.check(lx, a);
    if (id.empty()) id = "r" + std::to_string(rules.size() + 1);
    try {
      rules.emplace_back(id, std::move(body), std::move(head));
    } catch (const ModelError& e) {
      throw ParseError(line, col, e.what());
    }
  }
  try {
    return RuleSet(std::move(rules));
  } catch (const ModelError& e) {
    throw ParseError(lx.line(), lx.column(), e.what());
  }
}

FactSet parse_facts(std::string_view text, bool allow_nulls) {
  Lexer lx(text);
  ArityTracker arity;
  FactSet out;
  while (!lx.at_end()) {
    auto a = read_atom(lx, false, allow_nulls);
    arity.check(lx, a);
    lx.expect(".");
    out.insert(a);
  }
  return out;
}

Atom parse_atom(std::string_view text) {
  Lexer lx(text);
  auto a = read_atom(lx, true, true);
  lx.accept('.');
  if (!lx.at_end()) lx.fail("trailing input after atom");
  return a;
}

Term parse_term(std::string_view text) {
  Lexer lx(text);
  auto t = read_term(lx, true, true);
  if (!lx.at_end()) lx.fail("trailing input after term");
  return t;
}

std::string print_rules(const RuleSet& rules) {
  std::string out;
  for (const auto& r : rules) out += r.to_string() + "\n";
  return out;
}

std::string print_facts(const FactSet& facts) {
  std::string out;
  for (const auto& a : facts) out += a.to_string() + " .\n";
  return out;
}

std::string print_facts_sorted(const FactSet& facts) {
  std::string out;
  for (const auto& a : facts.sorted()) out += a.to_string() + " .\n";
  return out;
}

}  // namespace chase
