#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "chase/matching.hpp"
#include "chase/parse.hpp"
#include "chase/report.hpp"
#include "chase/termination.hpp"
#include "chase/tmred.hpp"
#include "chase/validate.hpp"

namespace chase::cli {

namespace {

// Unreadable files and bad flag combinations; mapped to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

KnowledgeBase load_kb(const std::string& rules, const std::string& facts) {
  return KnowledgeBase(parse_rules(read_file(rules)), parse_facts(read_file(facts)));
}

struct StrategyFlags {
  std::string name = "fifo";
  std::string script;
  std::string then;
  std::uint64_t seed = 0;
};

Strategy simple_strategy(const std::string& name, std::uint64_t seed) {
  if (name == "fifo") return Fifo{};
  if (name == "dfs") return Dfs{};
  if (name == "random") return Random{seed};
  throw UsageError("unknown strategy '" + name + "' (expected fifo, dfs, random or script)");
}

void check_strategy_flags(const StrategyFlags& f) {
  if (f.name == "script") {
    if (f.script.empty()) throw UsageError("--strategy script needs --script PATH");
  } else {
    simple_strategy(f.name, f.seed);
    if (!f.script.empty()) throw UsageError("--script requires --strategy script");
  }
  if (!f.then.empty()) {
    if (f.name != "script") throw UsageError("--then only follows a script");
    simple_strategy(f.then, f.seed);
  }
}

// Runs the selected strategy and, after a script, the --then continuation.
Derivation run_with(Derivation d, const StrategyFlags& f, std::size_t max_steps) {
  if (f.name != "script") return continue_chase(std::move(d), simple_strategy(f.name, f.seed), max_steps);
  auto script = parse_script(read_file(f.script));
  std::size_t budget = std::min(max_steps, script.size());
  d = continue_chase(std::move(d), Script{std::move(script)}, budget);
  if (!f.then.empty() && d.status() != Status::saturated && d.steps().size() < max_steps)
    d = continue_chase(std::move(d), simple_strategy(f.then, f.seed), max_steps - d.steps().size());
  return d;
}

std::string strategy_label(const StrategyFlags& f) {
  if (f.name == "script") return f.then.empty() ? "script" : "script+" + f.then;
  return strategy_name(simple_strategy(f.name, f.seed));
}

Configuration config_from_flags(const Machine& m, const std::string& word, const std::string& tape,
                                std::size_t pos, const std::string& state) {
  if (!word.empty() && !tape.empty()) throw UsageError("give either --word or --tape, not both");
  if (!tape.empty()) {
    auto c = make_config(m, tape, pos, state.empty() ? m.initial : state);
    if (!is_valid(m, c)) throw ModelError("invalid configuration " + c.to_string());
    return c;
  }
  return start_config(m, word);
}

std::vector<Term> split_terms(const std::string& s) {
  std::vector<Term> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_term(item));
  }
  return out;
}

}  // namespace

std::vector<TriggerDescriptor> parse_script(std::string_view text) {
  std::vector<TriggerDescriptor> out;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    auto pct = raw.find('%');
    std::istringstream words(pct == std::string::npos ? raw : raw.substr(0, pct));
    TriggerDescriptor d;
    if (!(words >> d.rule_id)) continue;
    for (std::string b; words >> b;) {
      auto eq = b.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == b.size())
        throw ParseError(line_no, 1, "expected var=term, got '" + b + "'");
      std::string var = b.substr(0, eq);
      if (var[0] == '?') var.erase(0, 1);
      d.bindings.insert_or_assign(var, parse_term(b.substr(eq + 1)));
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::string print_script(const std::vector<TriggerDescriptor>& script) {
  std::string out;
  for (const auto& d : script) {
    out += d.rule_id;
    for (const auto& [k, v] : d.bindings) out += " " + k + "=" + v.to_string();
    out += "\n";
  }
  return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"restricted chase workbench", "chasewb"};
  app.require_subcommand(1);

  // shared flag storage
  std::string rules, facts, output, trace, dot, machine_path, word, tape, state, atom_text, cells, brake = "w1";
  std::string count_state, policy = "first";
  std::size_t max_steps = 100, depth = 0, workers = 1, max_rounds = 12, pos = 1;
  std::size_t max_candidates = DecideOptions{}.max_candidates, max_nodes = ExploreOptions{}.max_nodes;
  bool json = false;
  StrategyFlags sf;

  auto add_kb = [&](CLI::App* c) {
    c->add_option("--rules", rules, "rule file")->required();
    c->add_option("--facts", facts, "fact file")->required();
  };
  auto add_strategy = [&](CLI::App* c) {
    c->add_option("--strategy", sf.name, "fifo | dfs | random | script");
    c->add_option("--script", sf.script, "script file, one trigger per line");
    c->add_option("--then", sf.then, "strategy continuing after the script");
    c->add_option("--seed", sf.seed, "seed for the random strategy");
    c->add_option("--max-steps", max_steps, "step budget");
  };
  auto add_config = [&](CLI::App* c) {
    c->add_option("--word", word, "input word over {0,1}");
    c->add_option("--tape", tape, "tape such as 11B or 1,1,B");
    c->add_option("--pos", pos, "head position (1-based)");
    c->add_option("--state", state, "state (defaults to the initial state)");
  };

  auto* chase_cmd = app.add_subcommand("chase", "run and analyse chase derivations");
  chase_cmd->require_subcommand(1);
  auto* run = chase_cmd->add_subcommand("run", "run one restricted chase derivation");
  add_kb(run);
  add_strategy(run);
  run->add_option("--trace", trace, "write a JSON Lines trace");
  run->add_option("--dot", dot, "write the final fact set as Graphviz");
  run->add_option("-o,--output", output, "write the final fact set");
  run->add_flag("--json", json, "print a JSON report");
  auto* explore_cmd = chase_cmd->add_subcommand("explore", "enumerate all derivations up to a depth");
  add_kb(explore_cmd);
  explore_cmd->add_option("--depth", depth, "depth bound")->required();
  explore_cmd->add_option("--workers", workers, "worker threads");
  explore_cmd->add_option("--max-nodes", max_nodes, "node cap");
  auto* decide = chase_cmd->add_subcommand("decide-bf", "breadth-first termination semi-decision");
  add_kb(decide);
  decide->add_option("--max-rounds", max_rounds, "round budget");
  decide->add_option("--max-candidates", max_candidates, "candidate cap per round");
  decide->add_flag("--json", json, "print a JSON verdict");
  auto* oblivious = chase_cmd->add_subcommand("oblivious", "run the oblivious chase with skolem naming");
  add_kb(oblivious);
  add_strategy(oblivious);
  oblivious->add_option("--trace", trace, "write a JSON Lines trace");
  oblivious->add_option("-o,--output", output, "write the final fact set");

  auto* tm_cmd = app.add_subcommand("tm", "machines and their rule encodings");
  tm_cmd->require_subcommand(1);
  auto* compile = tm_cmd->add_subcommand("compile", "compile a machine into rules");
  compile->add_option("--machine", machine_path, "machine file")->required();
  compile->add_option("-o,--output", output, "rule file to write");
  auto* encode = tm_cmd->add_subcommand("encode", "encode a configuration as a database");
  encode->add_option("--machine", machine_path, "machine file")->required();
  add_config(encode);
  encode->add_option("-o,--output", output, "fact file to write");
  auto* tm_run = tm_cmd->add_subcommand("run", "simulate the machine");
  tm_run->add_option("--machine", machine_path, "machine file")->required();
  add_config(tm_run);
  tm_run->add_option("--max-steps", max_steps, "step budget");
  tm_run->add_option("--count", count_state, "state whose occurrences are counted (default qloop)");
  tm_run->add_option("--policy", policy, "first | random");
  tm_run->add_option("--seed", sf.seed, "seed for the random policy");

  auto* check_cmd = app.add_subcommand("check", "structural checks");
  check_cmd->require_subcommand(1);
  auto* wild = check_cmd->add_subcommand("wild-frontier", "check a wild frontier of a configuration");
  wild->add_option("--facts", facts, "fact file (nulls allowed)")->required();
  wild->add_option("--machine", machine_path, "machine file")->required();
  add_config(wild);
  wild->add_option("--brake", brake, "overseer term");
  wild->add_option("--cells", cells, "comma-separated cell terms (default c1..c{n+1})");
  auto* bowtie = check_cmd->add_subcommand("bowtie", "bow-tie check and configuration sets");
  bowtie->add_option("--facts", facts, "fact file (nulls allowed)")->required();
  bowtie->add_option("--atom", atom_text, "state atom (default: every state atom)");
  auto* consistency = check_cmd->add_subcommand("consistency", "consistency of state atoms along a Fifo run");
  consistency->add_option("--machine", machine_path, "machine file")->required();
  add_config(consistency);
  consistency->add_option("--max-steps", max_steps, "step budget");
  bool without_brake = false;
  consistency->add_flag("--without-brake", without_brake, "drop the brake rule so the run follows the machine");
  auto* dagger = check_cmd->add_subcommand("dagger", "scan a derivation for a breadth-first violation");
  add_kb(dagger);
  add_strategy(dagger);

  auto* transform = app.add_subcommand("transform", "knowledge-base transformations");
  transform->require_subcommand(1);
  auto* internal = transform->add_subcommand("internalize", "move the database into the rules");
  add_kb(internal);
  internal->add_option("-o,--output", output, "rule file to write");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return usage_error;
  }

  try {
    if (run->parsed() || dagger->parsed()) {
      check_strategy_flags(sf);
      auto kb = load_kb(rules, facts);
      Derivation d = run_with(Derivation(kb), sf, max_steps);
      if (dagger->parsed()) {
        auto v = check_dagger_violation(d);
        out << dagger_json(v) << "\n";
        return v ? domain_error : ok;
      }
      if (!trace.empty()) write_file(trace, trace_jsonl(d, strategy_label(sf)));
      if (!dot.empty()) write_file(dot, to_dot(d.facts()));
      if (!output.empty()) write_file(output, print_facts_sorted(d.facts()));
      if (json) {
        out << derivation_json(d, strategy_label(sf)) << "\n";
      } else {
        out << "status: " << to_string(d.status()) << "\nlength: " << d.length() << "\n";
        out << print_facts_sorted(d.facts());
      }
      return ok;
    }
    if (explore_cmd->parsed()) {
      auto tree = explore(load_kb(rules, facts), depth, ExploreOptions{std::max<std::size_t>(1, workers), max_nodes});
      out << tree_json(tree) << "\n";
      return ok;
    }
    if (decide->parsed()) {
      auto v = decide_bf(load_kb(rules, facts), max_rounds, DecideOptions{max_candidates});
      out << (json ? verdict_json(v) : v.to_string()) << "\n";
      return ok;
    }
    if (oblivious->parsed()) {
      if (sf.name != "fifo" && sf.name != "random") throw UsageError("oblivious runs take fifo or random");
      auto d = run_oblivious(load_kb(rules, facts), simple_strategy(sf.name, sf.seed), max_steps);
      if (!trace.empty()) write_file(trace, trace_jsonl(d, strategy_label(sf)));
      if (!output.empty()) write_file(output, print_facts_sorted(d.facts()));
      out << "status: " << to_string(d.status()) << "\nlength: " << d.length() << "\n";
      out << print_facts_sorted(d.facts());
      return ok;
    }
    if (compile->parsed()) {
      auto rs = compile_ruleset(parse_machine(read_file(machine_path)));
      if (output.empty()) {
        out << print_rules(rs);
      } else {
        write_file(output, print_rules(rs));
        out << rs.size() << " rules\n";
      }
      return ok;
    }
    if (encode->parsed()) {
      auto m = parse_machine(read_file(machine_path));
      auto f = encode_config(config_from_flags(m, word, tape, pos, state));
      if (output.empty()) {
        out << print_facts(f);
      } else {
        write_file(output, print_facts(f));
        out << f.size() << " facts\n";
      }
      return ok;
    }
    if (tm_run->parsed()) {
      auto m = parse_machine(read_file(machine_path));
      if (policy != "first" && policy != "random") throw UsageError("--policy must be first or random");
      auto c0 = config_from_flags(m, word, tape, pos, state);
      auto r = run_machine(m, c0, max_steps, count_state.empty() ? m.loop_state : count_state,
                           policy == "first" ? RunPolicy::first : RunPolicy::random, sf.seed);
      for (const auto& c : r.trace) out << c.to_string() << "\n";
      out << "occurrences: " << r.occurrences << "\nhalted: " << (r.halted ? "yes" : "no") << "\n";
      return ok;
    }
    if (wild->parsed()) {
      auto m = parse_machine(read_file(machine_path));
      auto rho = config_from_flags(m, word, tape, pos, state);
      auto f = parse_facts(read_file(facts), true);
      std::vector<Term> xs = split_terms(cells);
      if (cells.empty())
        for (std::size_t i = 1; i <= rho.n() + 1; ++i) xs.push_back(cell_constant(i));
      auto r = check_wild_frontier_report(f, rho, parse_term(brake), xs);
      out << check_json("wild-frontier", r) << "\n";
      return r.ok ? ok : domain_error;
    }
    if (bowtie->parsed()) {
      auto f = parse_facts(read_file(facts), true);
      std::vector<StateAtom> targets;
      if (atom_text.empty()) {
        targets = state_atoms(f);
      } else {
        StateAtom a{parse_atom(atom_text)};
        if (!a.atom.is_ground() || !f.contains(a.atom) || !is_state_predicate(a.atom.predicate) || a.atom.arity() != 2)
          throw ModelError(atom_text + " is not a state atom of the fact set");
        targets.push_back(a);
      }
      bool all = true;
      for (const auto& a : targets) {
        bool bt = check_bowtie(f, a);
        all = all && bt;
        out << a.atom.to_string() << ": " << (bt ? "bow tie" : "not a bow tie") << "\n";
        if (!bt) continue;
        for (const auto& s : extract_configs(f, a)) {
          auto c = decode_config(s, a);
          out << "  " << (c ? c->to_string() : "(no configuration)") << "\n";
        }
      }
      return all ? ok : domain_error;
    }
    if (consistency->parsed()) {
      auto m = parse_machine(read_file(machine_path));
      auto rho = config_from_flags(m, word, tape, pos, state);
      auto cm = compile_machine(m);
      RuleSet rs = cm.rules;
      if (without_brake) {
        std::vector<Rule> kept;
        for (const auto& r : cm.rules)
          if (cm.at(r.id()).kind != ReductionRule::Kind::brake) kept.push_back(r);
        rs = RuleSet(std::move(kept));
      }
      auto d = run_chase(KnowledgeBase(rs, encode_config(rho)), Fifo{}, max_steps);
      bool all = true;
      for (const auto& a : state_atoms(d.facts())) {
        auto r = check_consistency_report(d, cm, a, rho);
        all = all && r.ok;
        out << a.atom.to_string() << " " << conf_of(d, cm, a, rho).to_string() << ": "
            << (r.ok ? "consistent" : "inconsistent (" + r.clause + ")") << "\n";
      }
      return all ? ok : domain_error;
    }
    if (internal->parsed()) {
      auto rs = internalize(load_kb(rules, facts));
      if (output.empty()) {
        out << print_rules(rs);
      } else {
        write_file(output, print_rules(rs));
        out << rs.size() << " rules\n";
      }
      return ok;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return usage_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return domain_error;
  }
  err << "usage error: no command\n";
  return usage_error;
}

}  // namespace chase::cli
