#include "chase/report.hpp"

#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace chase {

using nlohmann::json;

namespace {

json atoms_json(const std::vector<Atom>& atoms) {
  json out = json::array();
  for (const auto& a : atoms) out.push_back(a.to_string());
  return out;
}

json substitution_json(const Substitution& s) {
  json out = json::object();
  for (const auto& [k, v] : s) out[k] = v.to_string();
  return out;
}

json trigger_json(const Trigger& t) { return {{"rule", t.rule_id}, {"sigma", substitution_json(t.sigma)}}; }

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string trace_jsonl(const Derivation& d, const std::string& strategy) {
  std::ostringstream os;
  json header = {{"format", "chase-trace"},
                 {"version", trace_format_version},
                 {"strategy", strategy},
                 {"naming", d.naming() == NullNaming::canonical ? "canonical" : "skolem"},
                 {"status", to_string(d.status())},
                 {"steps", d.steps().size()},
                 {"database", atoms_json(d.database().sorted())}};
  os << header.dump() << "\n";
  for (const auto& s : d.steps()) {
    json line = {{"step", s.index},
                 {"rule", s.trigger.rule_id},
                 {"sigma", substitution_json(s.trigger.sigma)},
                 {"extension", substitution_json(s.extension)},
                 {"added", atoms_json(s.added)}};
    os << line.dump() << "\n";
  }
  return os.str();
}

std::string to_dot(const FactSet& f, const std::string& graph_name) {
  std::map<Term, std::vector<std::string>> labels;
  for (const auto& t : f.terms()) labels[t];
  std::ostringstream edges;
  std::size_t hyper = 0;
  for (const auto& a : f) {
    if (a.arity() == 0) {
      edges << "  " << quote(a.predicate) << " [shape=box];\n";
    } else if (a.arity() == 1) {
      labels[a.args[0]].push_back(a.predicate);
    } else if (a.arity() == 2) {
      edges << "  " << quote(a.args[0].to_string()) << " -> " << quote(a.args[1].to_string())
            << " [label=" << quote(a.predicate) << "];\n";
    } else {
      std::string id = "h" + std::to_string(hyper++);
      edges << "  " << id << " [shape=point, xlabel=" << quote(a.predicate) << "];\n";
      for (std::size_t i = 0; i < a.arity(); ++i)
        edges << "  " << id << " -> " << quote(a.args[i].to_string()) << " [label=" << quote(std::to_string(i + 1))
              << "];\n";
    }
  }
  std::ostringstream os;
  os << "digraph " << quote(graph_name) << " {\n";
  for (const auto& [t, preds] : labels) {
    std::string label = quote(t.to_string());
    if (!preds.empty()) {
      std::string names;
      for (std::size_t i = 0; i < preds.size(); ++i) names += (i ? "," : "") + preds[i];
      // splice the two quoted parts around a raw \n line break
      label = label.substr(0, label.size() - 1) + "\\n" + quote(names).substr(1);
    }
    os << "  " << quote(t.to_string()) << " [label=" << label << (t.is_null() ? ", style=dashed" : "")
       << "];\n";
  }
  os << edges.str() << "}\n";
  return os.str();
}

std::string derivation_json(const Derivation& d, const std::string& strategy) {
  json steps = json::array();
  for (const auto& s : d.steps()) {
    json j = trigger_json(s.trigger);
    j["added"] = atoms_json(s.added);
    steps.push_back(j);
  }
  json out = {{"strategy", strategy},
              {"status", to_string(d.status())},
              {"length", d.length()},
              {"facts", atoms_json(d.facts().sorted())},
              {"steps", steps}};
  return out.dump(2);
}

std::string verdict_json(const Verdict& v) {
  json rounds = json::array();
  for (const auto& r : v.rounds) rounds.push_back({{"round", r.round}, {"candidates", r.candidates}, {"kept", r.kept}});
  json out = {{"verdict", v.accepted() ? "accepted" : "undecided"},
              {"round", v.round},
              {"resource_limit", v.resource_limit},
              {"rounds", rounds}};
  return out.dump(2);
}

std::string tree_json(const DerivationTree& t) {
  json depths = json::array();
  for (const auto& s : t.per_depth)
    depths.push_back({{"depth", s.depth}, {"nodes", s.nodes}, {"saturated", s.saturated}, {"open", s.open}});
  json out = {{"depth_bound", t.depth_bound},
              {"nodes", t.nodes.size()},
              {"saturated_leaves", t.saturated_leaves},
              {"open_leaves", t.open_leaves},
              {"truncated", t.truncated},
              {"per_depth", depths}};
  return out.dump(2);
}

std::string check_json(const std::string& check, const CheckResult& r) {
  json out = {{"check", check}, {"ok", r.ok}};
  if (!r.ok) out["clause"] = r.clause;
  return out.dump(2);
}

std::string dagger_json(const std::optional<DaggerViolation>& v) {
  json out = {{"check", "dagger"}, {"ok", !v.has_value()}};
  if (v) {
    out["at"] = v->at;
    out["loaded_at"] = v->loaded_at;
    out["active_count"] = v->active_count;
    out["trigger"] = trigger_json(v->trigger);
  }
  return out.dump(2);
}

}  // namespace chase
