#include "chase/tmred.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <set>
#include <sstream>

namespace chase {

namespace {

bool is_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::string spaced = s;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

// ---------------------------------------------------------------- Machine

std::vector<std::string> Machine::letters() const {
  auto out = alphabet;
  out.emplace_back(blank);
  return out;
}

const std::vector<Transition>& Machine::transitions(const std::string& state, const std::string& letter) const {
  static const std::vector<Transition> none;
  auto it = delta.find({state, letter});
  return it == delta.end() ? none : it->second;
}

std::size_t Machine::transition_count() const {
  std::size_t n = 0;
  for (const auto& [_, v] : delta) n += v.size();
  return n;
}

void Machine::validate() const {
  if (states.empty()) throw ModelError("machine has no states");
  std::set<std::string> seen;
  for (const auto& q : states) {
    if (!is_name(q)) throw ModelError("malformed state name '" + q + "'");
    if (!seen.insert(q).second) throw ModelError("duplicate state " + q);
  }
  if (!contains(states, initial)) throw ModelError("initial state '" + initial + "' is not a state");
  if (!contains(states, loop_state)) throw ModelError("qloop '" + loop_state + "' is not a state");
  seen.clear();
  for (const auto& a : alphabet) {
    if (!is_name(a)) throw ModelError("malformed letter '" + a + "'");
    if (a == blank) throw ModelError("the blank may not be part of the alphabet");
    if (!seen.insert(a).second) throw ModelError("duplicate letter " + a);
  }
  if (!contains(alphabet, "0") || !contains(alphabet, "1")) throw ModelError("alphabet must contain 0 and 1");
  auto ls = letters();
  for (const auto& [key, trs] : delta) {
    if (!contains(states, key.first)) throw ModelError("transition from unknown state " + key.first);
    if (!contains(ls, key.second)) throw ModelError("transition reads unknown letter " + key.second);
    for (const auto& tr : trs) {
      if (!contains(states, tr.state)) throw ModelError("transition to unknown state " + tr.state);
      if (tr.write == blank) throw ModelError("transition writes the blank");
      if (!contains(alphabet, tr.write)) throw ModelError("transition writes unknown letter " + tr.write);
    }
  }
}

Machine parse_machine(std::string_view text) {
  Machine m;
  bool have_states = false;
  bool have_loop = false;
  bool have_gamma = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  auto fail = [&](const std::string& msg) -> void {
    throw ModelError("machine line " + std::to_string(line_no) + ": " + msg);
  };
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    auto pct = raw.find('%');
    std::string line = trim(pct == std::string::npos ? raw : raw.substr(0, pct));
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) fail("expected 'key: value'");
    std::string key = trim(line.substr(0, colon));
    std::string value = trim(line.substr(colon + 1));
    if (key == "states") {
      m.states = words(value);
      have_states = true;
    } else if (key == "initial") {
      m.initial = value;
    } else if (key == "qloop") {
      m.loop_state = value;
      have_loop = true;
    } else if (key == "gamma") {
      m.alphabet = words(value);
      have_gamma = true;
    } else if (key == "delta") {
      auto arrow = value.find("->");
      if (arrow == std::string::npos) fail("delta entry needs '->'");
      auto lhs = split(value.substr(0, arrow), ',');
      auto rhs = split(value.substr(arrow + 2), ',');
      if (lhs.size() != 2 || rhs.size() != 3) fail("delta entry must read 'q,a -> q2,b,R|L'");
      Transition tr{rhs[0], rhs[1], Move::right};
      if (rhs[2] == "R") {
        tr.move = Move::right;
      } else if (rhs[2] == "L") {
        tr.move = Move::left;
      } else {
        fail("direction must be R or L");
      }
      auto& v = m.delta[{lhs[0], lhs[1]}];
      if (std::find(v.begin(), v.end(), tr) == v.end()) v.push_back(tr);
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (!have_states) throw ModelError("machine file lacks 'states:'");
  if (!have_loop) throw ModelError("machine file lacks 'qloop:'");
  if (!have_gamma) throw ModelError("machine file lacks 'gamma:'");
  if (m.initial.empty()) m.initial = m.states.front();
  m.validate();
  return m;
}

std::string print_machine(const Machine& m) {
  std::string out = "states:";
  for (const auto& q : m.states) out += " " + q;
  out += "\ninitial: " + m.initial + "\nqloop: " + m.loop_state + "\ngamma:";
  for (const auto& a : m.alphabet) out += " " + a;
  out += "\n";
  for (const auto& [key, trs] : m.delta)
    for (const auto& tr : trs)
      out += "delta: " + key.first + "," + key.second + " -> " + tr.state + "," + tr.write + "," +
             (tr.move == Move::right ? "R" : "L") + "\n";
  return out;
}

// ---------------------------------------------------------------- Configuration

std::string Configuration::letter(std::size_t i) const { return i == tape.size() + 1 ? std::string(blank) : at(i); }

std::string Configuration::tape_string() const {
  std::string out;
  for (const auto& a : tape) out += a;
  return out;
}

std::string Configuration::to_string() const {
  std::string out = "<" + std::to_string(n()) + ", [";
  for (std::size_t i = 0; i < tape.size(); ++i) out += (i ? "," : "") + tape[i];
  return out + "], " + std::to_string(head) + ", " + state + ">";
}

bool is_valid(const Machine& m, const Configuration& c) {
  if (c.tape.empty() || c.head < 1 || c.head > c.n()) return false;
  if (!contains(m.states, c.state)) return false;
  auto ls = m.letters();
  bool seen_blank = false;
  for (const auto& a : c.tape) {
    if (!contains(ls, a)) return false;
    if (seen_blank && a != blank) return false;
    seen_blank = seen_blank || a == blank;
  }
  return c.tape.back() == blank;
}

Configuration start_config(const Machine& m, std::string_view word) {
  Configuration c;
  for (char ch : word) {
    if (ch != '0' && ch != '1') throw ModelError(std::string("input symbol '") + ch + "' is not 0 or 1");
    c.tape.emplace_back(1, ch);
  }
  c.tape.emplace_back(blank);
  c.head = 1;
  c.state = m.initial;
  return c;
}

Configuration make_config(const Machine& m, std::string_view tape, std::size_t head, const std::string& state) {
  Configuration c;
  std::string t(tape);
  if (t.find(',') != std::string::npos) {
    c.tape = split(t, ',');
  } else {
    for (char ch : t) c.tape.emplace_back(1, ch);
  }
  c.head = head;
  c.state = state;
  if (!is_valid(m, c)) throw ModelError("invalid configuration " + c.to_string());
  return c;
}

Configuration apply_transition(const Configuration& c, const Transition& tr) {
  Configuration out = c;
  out.tape.at(c.head - 1) = tr.write;
  out.tape.emplace_back(blank);
  out.head = tr.move == Move::right ? c.head + 1 : c.head - 1;
  out.state = tr.state;
  return out;
}

std::vector<Configuration> next_configs(const Machine& m, const Configuration& c) {
  std::vector<Configuration> out;
  for (const auto& tr : m.transitions(c.state, c.at(c.head))) {
    if (tr.move == Move::left && c.head < 2) continue;
    out.push_back(apply_transition(c, tr));
  }
  return out;
}

MachineRun run_machine(const Machine& m, const Configuration& c0, std::size_t max_steps, const std::string& count_state,
                       RunPolicy policy, std::uint64_t seed) {
  MachineRun run;
  std::mt19937_64 rng(seed);
  run.trace.push_back(c0);
  for (std::size_t s = 0; s < max_steps; ++s) {
    auto next = next_configs(m, run.trace.back());
    if (next.empty()) {
      run.halted = true;
      break;
    }
    std::size_t pick = policy == RunPolicy::first ? 0 : static_cast<std::size_t>(rng() % next.size());
    run.trace.push_back(std::move(next[pick]));
  }
  if (!run.halted && next_configs(m, run.trace.back()).empty()) run.halted = true;
  for (const auto& c : run.trace)
    if (c.state == count_state) ++run.occurrences;
  return run;
}

// ---------------------------------------------------------------- reduction

std::string letter_predicate(const std::string& letter) { return "Sym_" + letter; }
std::string state_predicate(const std::string& state) { return "St_" + state; }
bool is_letter_predicate(const std::string& p) { return p.rfind("Sym_", 0) == 0; }
bool is_state_predicate(const std::string& p) { return p.rfind("St_", 0) == 0; }
std::string letter_of_predicate(const std::string& p) { return p.substr(4); }
std::string state_of_predicate(const std::string& p) { return p.substr(3); }

std::vector<Atom> br_set(const Term& x, const Term& w) {
  return {Atom(pred::F, {x, w, w}), Atom(pred::R, {x, w, w}), Atom(pred::Real, {x}), Atom(pred::Brake, {w})};
}

const ReductionRule& CompiledMachine::at(const std::string& rule_id) const {
  auto it = info.find(rule_id);
  if (it == info.end()) throw ModelError("rule " + rule_id + " is not part of the reduction");
  return it->second;
}

namespace {

Term U(const char* n) { return Term::universal(n); }
Term X(const char* n) { return Term::existential(n); }

std::string step_id(const std::string& from, const std::string& read, const Transition& tr, const std::string& c) {
  return std::string("step_") + (tr.move == Move::right ? "R" : "L") + "_" + from + "_" + read + "_" + tr.state + "_" +
         tr.write + "_" + c;
}

class RuleBuilder {
 public:
  RuleBuilder& add(std::vector<Atom>& part, Atom a) {
    if (std::find(part.begin(), part.end(), a) == part.end()) part.push_back(std::move(a));
    return *this;
  }
  RuleBuilder& body(Atom a) { return add(body_, std::move(a)); }
  RuleBuilder& head(Atom a) { return add(head_, std::move(a)); }
  RuleBuilder& body_br(const Term& x, const Term& w) {
    for (auto& a : br_set(x, w)) body(std::move(a));
    return *this;
  }
  RuleBuilder& head_br(const Term& x, const Term& w) {
    for (auto& a : br_set(x, w)) head(std::move(a));
    return *this;
  }
  Rule build(std::string id) { return Rule(std::move(id), std::move(body_), std::move(head_)); }

 private:
  std::vector<Atom> body_;
  std::vector<Atom> head_;
};

}  // namespace

std::string CompiledMachine::step_rule_id(const std::string& from, const std::string& read, const Transition& tr,
                                          const std::string& neighbour) const {
  return step_id(from, read, tr, neighbour);
}

CompiledMachine compile_machine(const Machine& m) {
  m.validate();
  CompiledMachine out;
  std::vector<Rule> rules;
  const auto letters = m.letters();
  const Term w = U("w"), x = U("x"), y = U("y"), xn_u = U("xn"), wn_u = U("wn");
  const Term xn = X("xn"), yn = X("yn"), wn = X("wn");

  {
    RuleBuilder b;
    b.body(Atom(pred::Brake, {w}));
    for (const auto& a : letters) b.head(Atom(letter_predicate(a), {w, w}));
    for (const auto& q : m.states) b.head(Atom(state_predicate(q), {w, w}));
    b.head(Atom(pred::F, {w, w, w}))
        .head(Atom(pred::R, {w, w, w}))
        .head(Atom(pred::C_L, {w, w}))
        .head(Atom(pred::C_R, {w, w}))
        .head(Atom(pred::Real, {w}))
        .head(Atom(pred::NextBr, {w, w}));
    rules.push_back(b.build("brake"));
    out.info["brake"] = ReductionRule{ReductionRule::Kind::brake, {}, {}, {}, {}, {}, false};
  }
  {
    RuleBuilder b;
    b.body_br(x, w).body(Atom(pred::NextBr, {w, wn_u})).head_br(x, wn_u);
    rules.push_back(b.build("next_br"));
    out.info["next_br"] = ReductionRule{ReductionRule::Kind::next_br, {}, {}, {}, {}, {}, false};
  }

  for (const auto& q : m.states) {
    for (const auto& a : letters) {
      for (const auto& tr : m.transitions(q, a)) {
        const bool loop = q == m.loop_state;
        const Term W = loop ? wn : w;
        for (const auto& c : letters) {
          RuleBuilder b;
          b.body(Atom(state_predicate(q), {x, w})).body(Atom(letter_predicate(a), {x, w}));
          if (tr.move == Move::right) {
            b.body(Atom(pred::R, {x, y, w}));
          } else {
            b.body(Atom(pred::R, {y, x, w}));
          }
          b.body(Atom(letter_predicate(c), {y, w})).body_br(x, w).body_br(y, w);

          b.head(Atom(state_predicate(tr.state), {yn, W}))
              .head(Atom(letter_predicate(c), {yn, W}))
              .head(Atom(letter_predicate(tr.write), {xn, W}));
          if (tr.move == Move::right) {
            b.head(Atom(pred::C_L, {xn, W})).head(Atom(pred::C_R, {yn, W})).head(Atom(pred::R, {xn, yn, W}));
          } else {
            b.head(Atom(pred::C_L, {yn, W})).head(Atom(pred::C_R, {xn, W})).head(Atom(pred::R, {yn, xn, W}));
          }
          b.head(Atom(pred::F, {x, xn, W})).head(Atom(pred::F, {y, yn, W})).head_br(xn, W).head_br(yn, W);
          if (loop) b.head(Atom(pred::NextBr, {w, wn}));

          auto id = step_id(q, a, tr, c);
          rules.push_back(b.build(id));
          out.info[id] = ReductionRule{ReductionRule::Kind::step, q, a, tr, c, {}, loop};
        }
      }
    }
  }

  for (const auto& a : letters) {
    RuleBuilder b;
    b.body(Atom(pred::C_R, {xn_u, wn_u}))
        .body(Atom(pred::F, {x, xn_u, wn_u}))
        .body(Atom(pred::R, {x, y, w}))
        .body(Atom(letter_predicate(a), {y, w}))
        .body_br(x, w)
        .body_br(xn_u, wn_u)
        .body_br(y, w);
    b.head(Atom(pred::F, {y, yn, wn_u}))
        .head(Atom(pred::R, {xn_u, yn, wn_u}))
        .head(Atom(letter_predicate(a), {yn, wn_u}))
        .head(Atom(pred::C_R, {yn, wn_u}))
        .head_br(yn, wn_u);
    auto id = "copy_R_" + a;
    rules.push_back(b.build(id));
    out.info[id] = ReductionRule{ReductionRule::Kind::copy_right, {}, {}, {}, {}, a, false};
  }
  for (const auto& a : letters) {
    RuleBuilder b;
    b.body(Atom(pred::C_L, {xn_u, wn_u}))
        .body(Atom(pred::F, {x, xn_u, wn_u}))
        .body(Atom(pred::R, {y, x, w}))
        .body(Atom(letter_predicate(a), {y, w}))
        .body_br(x, w)
        .body_br(xn_u, wn_u)
        .body_br(y, w);
    b.head(Atom(pred::F, {y, yn, wn_u}))
        .head(Atom(pred::R, {yn, xn_u, wn_u}))
        .head(Atom(letter_predicate(a), {yn, wn_u}))
        .head(Atom(pred::C_L, {yn, wn_u}))
        .head_br(yn, wn_u);
    auto id = "copy_L_" + a;
    rules.push_back(b.build(id));
    out.info[id] = ReductionRule{ReductionRule::Kind::copy_left, {}, {}, {}, {}, a, false};
  }
  {
    RuleBuilder b;
    b.body(Atom(pred::C_R, {xn_u, wn_u}))
        .body(Atom(pred::F, {x, xn_u, wn_u}))
        .body(Atom(pred::End, {x, w}))
        .body_br(x, w)
        .body_br(xn_u, wn_u);
    b.head(Atom(pred::R, {xn_u, yn, wn_u}))
        .head(Atom(letter_predicate(blank), {yn, wn_u}))
        .head(Atom(pred::End, {yn, wn_u}))
        .head_br(yn, wn_u);
    rules.push_back(b.build("end"));
    out.info["end"] = ReductionRule{ReductionRule::Kind::end, {}, {}, {}, {}, {}, false};
  }
  out.rules = RuleSet(std::move(rules));
  return out;
}

RuleSet compile_ruleset(const Machine& m) { return compile_machine(m).rules; }

Term cell_constant(std::size_t i) { return Term::constant("c" + std::to_string(i)); }
Term initial_brake() { return Term::constant("w1"); }

FactSet encode_config(const Configuration& c) {
  FactSet out;
  const Term w = initial_brake();
  const std::size_t n = c.n();
  for (std::size_t i = 1; i <= n; ++i) {
    out.insert(Atom(pred::R, {cell_constant(i), cell_constant(i + 1), w}));
    out.insert(Atom(letter_predicate(c.at(i)), {cell_constant(i), w}));
  }
  out.insert(Atom(state_predicate(c.state), {cell_constant(c.head), w}));
  out.insert(Atom(letter_predicate(blank), {cell_constant(n + 1), w}));
  out.insert(Atom(pred::End, {cell_constant(n + 1), w}));
  for (std::size_t i = 1; i <= n + 1; ++i)
    for (const auto& a : br_set(cell_constant(i), w)) out.insert(a);
  return out;
}

}  // namespace chase
