#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tracekit/io.hpp"
#include "tracekit/monitors.hpp"

namespace tracekit::cli {

namespace {

using io::Json;

struct Report {
  std::string command;
  std::string mode;
  std::string digest;
  Json findings = Json::array();
  std::vector<std::string> diagnostics;
  Json extra = Json::object();
  std::vector<std::string> text;
  int code = kClean;
};

struct Inputs {
  std::string blob;

  std::string read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string content = ss.str();
    blob += content;
    blob += '\0';
    return content;
  }
};

ExplorationOptions exploration_options() {
  ExplorationOptions opt;
  if (const char* env = std::getenv("TRACEKIT_STATE_BUDGET")) {
    const std::string s(env);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw InputError("TRACEKIT_STATE_BUDGET must be a positive integer");
    opt.state_budget = std::stoull(s);
    if (opt.state_budget == 0) throw InputError("TRACEKIT_STATE_BUDGET must be a positive integer");
  }
  return opt;
}

ConflictMode parse_mode(const std::string& m) {
  if (m == "race") return ConflictMode::race;
  if (m == "atomicity") return ConflictMode::atomicity;
  throw InputError("unknown mode '" + m + "' (expected race or atomicity)");
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string schedule_text(const ProgramExecution& exec, const std::vector<EventId>& s) {
  std::vector<std::string> ids;
  for (EventId e : s) ids.push_back(exec.display_id(e));
  return join(ids, " ");
}

void emit(const Report& r, bool json, std::ostream& out) {
  if (json) {
    Json j;
    j["tool"] = "tracekit";
    j["version"] = kVersion;
    j["command"] = r.command;
    j["input_digest"] = r.digest;
    j["mode"] = r.mode;
    j["findings"] = r.findings;
    j["diagnostics"] = r.diagnostics;
    for (const auto& [k, v] : r.extra.items()) j[k] = v;
    out << j.dump(2) << "\n";
    return;
  }
  for (const auto& line : r.text) out << line << "\n";
  for (const auto& d : r.diagnostics) out << "note: " << d << "\n";
}

// ---------------------------------------------------------------------------

Report cmd_races(const std::string& log) {
  Inputs in;
  auto exec = io::parse_log(in.read(log));
  Report r{"races", "race", io::digest(in.blob)};
  for (const auto& race : detect_races(exec)) {
    r.findings.push_back(io::to_json(race, exec));
    r.text.push_back("race: events " + exec.display_id(race.first) + " and " + exec.display_id(race.second) +
                     " on " + race.variable.str() + " (" + std::string(to_string(race.first_op)) + ", " +
                     std::string(to_string(race.second_op)) + ")");
  }
  if (r.findings.empty()) r.text.push_back("no races");
  r.code = r.findings.empty() ? kClean : kFindings;
  return r;
}

Report cmd_atomicity(const std::string& log) {
  Inputs in;
  auto exec = io::parse_log(in.read(log));
  Report r{"atomicity", "atomicity", io::digest(in.blob)};
  for (const auto& v : detect_atomicity_violations(exec)) {
    r.findings.push_back(io::to_json(v, exec));
    r.text.push_back("atomicity violation: transaction of " + v.thread.str() + " from " +
                     exec.display_id(v.begin) + " to " + (v.end ? exec.display_id(*v.end) : "open") +
                     " interleaved by " + exec.display_id(v.interloper) + " (" + v.interloper_thread.str() + ")");
  }
  if (r.findings.empty()) r.text.push_back("no atomicity violations");
  r.code = r.findings.empty() ? kClean : kFindings;
  return r;
}

Report cmd_serializable(const std::string& log, std::size_t limit) {
  Inputs in;
  auto exec = io::parse_log(in.read(log));
  Report r{"serializable", "atomicity", io::digest(in.blob)};
  auto v = is_serializable(exec, limit);
  r.extra["verdict"] = std::string(to_string(v.verdict));
  r.extra["extensions_checked"] = v.extensions_checked;
  const std::string checked = std::to_string(v.extensions_checked) + " linear extension" +
                              (v.extensions_checked == 1 ? "" : "s");
  switch (v.verdict) {
    case Serializability::serializable: {
      std::vector<std::string> ids;
      for (EventId e : *v.witness) ids.push_back(exec.display_id(e));
      r.extra["witness"] = ids;
      r.text.push_back("serializable: serial order " + schedule_text(exec, *v.witness));
      r.code = kClean;
      break;
    }
    case Serializability::violating:
      r.findings.push_back({{"verdict", "violating"}, {"extensions_checked", v.extensions_checked}});
      r.text.push_back("violating: none of the " + checked + " is serial");
      r.code = kFindings;
      break;
    case Serializability::unknown:
      r.diagnostics.push_back("limit of " + std::to_string(limit) + " linear extensions reached");
      r.text.push_back("unknown: no serial order among the first " + checked);
      r.code = kResourceBound;
      break;
  }
  return r;
}

Report cmd_trace(const std::string& log, const std::string& mode_name, const std::string& dot) {
  Inputs in;
  auto exec = io::parse_log(in.read(log));
  const ConflictMode mode = parse_mode(mode_name);
  check_well_formed(exec);
  Report r{"trace", std::string(to_string(mode)), io::digest(in.blob)};
  const TraceOrder t = program_trace(exec, mode);
  const auto nf = foata_normal_form(exec.word(), induced_dependence(standard_alphabet(exec, mode)));
  Json edges = Json::array();
  std::vector<std::string> edge_text;
  for (const auto& [i, j] : t.edges()) {
    edges.push_back({exec.display_id(i), exec.display_id(j)});
    edge_text.push_back(exec.display_id(i) + "->" + exec.display_id(j));
  }
  Json steps = Json::array();
  for (const auto& step : nf.steps) {
    Json s = Json::array();
    for (EventId e : step) s.push_back(exec.display_id(e));
    steps.push_back(s);
  }
  r.extra["events"] = t.size();
  r.extra["edges"] = edges;
  r.extra["foata"] = steps;
  r.text.push_back("events: " + std::to_string(t.size()));
  r.text.push_back("edges: " + (edge_text.empty() ? std::string("none") : join(edge_text, " ")));
  r.text.push_back("foata: " + nf.to_string());
  if (!dot.empty()) {
    std::ofstream f(dot, std::ios::binary);
    if (!f) throw InputError("cannot write " + dot);
    f << export_dot(t);
    r.extra["dot"] = dot;
    r.text.push_back("dot: " + dot);
  }
  return r;
}

std::vector<ActionId> parse_gamma(const std::vector<std::string>& values, const DistributedAlphabet& alpha) {
  if (values.empty()) return alpha.actions();
  std::vector<ActionId> out;
  for (const auto& v : values) {
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ';')) {
      const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
      if (b == std::string::npos) continue;
      ActionId a(item.substr(b, e - b + 1));
      alpha.require_action(a);
      out.push_back(a);
    }
  }
  if (out.empty()) throw InputError("--gamma names no actions");
  return out;
}

Report cmd_gossip(const std::string& log, const std::string& tree_path, const std::vector<std::string>& gamma_flags,
                  bool table, const std::string& mode_name) {
  Inputs in;
  auto exec = io::parse_log(in.read(log));
  const ConflictMode mode = parse_mode(mode_name);
  check_well_formed(exec);
  auto tree_doc = io::parse_document(in.read(tree_path), tree_path);
  if (!tree_doc.contains("tree")) throw InputError(tree_path + ": missing section 'tree'");
  const ProcessTree tree = io::tree_from_json(tree_doc["tree"]);
  Report r{"gossip", std::string(to_string(mode)), io::digest(in.blob)};

  const DistributedAlphabet alpha = standard_alphabet(exec, mode);
  const auto gamma = parse_gamma(gamma_flags, alpha);
  const Word w = exec.word();
  const auto snaps = replay(w, alpha, tree, gamma);

  Json js = Json::array();
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    Json step;
    step["event"] = exec.display_id(i);
    step["action"] = w[i - 1].str();
    for (const auto& p : alpha.processes()) {
      step["knowledge"][p.str()] = io::to_json(snaps[i].knowledge(p));
      const auto st = snaps[i].storage(p);
      if (!st.within_bound())
        r.diagnostics.push_back("storage of " + p.str() + " exceeds its bound after event " + exec.display_id(i));
    }
    js.push_back(step);
  }
  std::vector<std::string> gamma_names;
  for (const auto& a : gamma) gamma_names.push_back(a.str());
  r.extra["gamma"] = gamma_names;
  r.extra["snapshots"] = js;
  if (table) {
    const std::string t = io::gossip_table(snaps, w, &exec);
    r.extra["table"] = t;
    std::istringstream lines(t);
    for (std::string line; std::getline(lines, line);) r.text.push_back(line);
  } else {
    for (const auto& p : alpha.processes())
      r.text.push_back(p.str() + ": " + snaps.back().knowledge(p).to_string());
  }
  return r;
}

Report cmd_zrun(const std::string& automaton_path, const std::string& word_path) {
  Inputs in;
  auto A = io::automaton_from_json(io::parse_document(in.read(automaton_path), automaton_path));
  const Word w = io::parse_word(in.read(word_path));
  Report r{"zrun", "automaton", io::digest(in.blob)};
  const auto result = run(A, w);
  r.extra["verdict"] = std::string(to_string(result.verdict));
  std::vector<std::string> finals;
  for (const auto& s : result.final_states) finals.push_back(A.describe(s));
  r.extra["final_states"] = finals;
  std::string head(to_string(result.verdict));
  if (result.stuck_at) {
    r.extra["stuck_at"] = *result.stuck_at;
    head += " at position " + std::to_string(*result.stuck_at) + " (" + w[*result.stuck_at - 1].str() + ")";
  }
  r.text.push_back(head);
  for (const auto& f : finals) r.text.push_back("  " + f);
  if (result.verdict != RunVerdict::accepted) {
    Json f{{"verdict", std::string(to_string(result.verdict))}};
    if (result.stuck_at) f["stuck_at"] = *result.stuck_at;
    r.findings.push_back(f);
  }
  r.code = r.findings.empty() ? kClean : kFindings;
  return r;
}

Json path_json(const Word& w) {
  Json j = Json::array();
  for (const auto& a : w) j.push_back(a.str());
  return j;
}

Report cmd_zcheck(const std::string& automaton_path, bool det, bool locrej, bool nonblock, bool closed) {
  Inputs in;
  auto A = io::automaton_from_json(io::parse_document(in.read(automaton_path), automaton_path));
  Report r{"zcheck", "automaton", io::digest(in.blob)};
  if (!det && !locrej && !nonblock && !closed) det = locrej = nonblock = closed = true;
  const auto opt = exploration_options();
  const bool deterministic = is_deterministic(A);

  if (det) {
    r.extra["deterministic"] = deterministic;
    r.text.push_back(std::string("deterministic: ") + (deterministic ? "yes" : "no"));
    if (!deterministic) r.findings.push_back({{"check", "deterministic"}});
  }
  if (locrej) {
    const auto rep = check_locally_rejecting(A, opt);
    r.extra["locally_rejecting"] = rep.ok();
    r.text.push_back(std::string("locally rejecting: ") + (rep.ok() ? "yes" : "no"));
    auto add = [&](const char* kind, const StateCounterexample& c) {
      r.findings.push_back({{"check", "locally-rejecting"}, {"kind", kind}, {"path", path_json(c.path)},
                            {"state", c.description}});
      r.text.push_back(std::string("  ") + kind + ": after [" + to_string(c.path) + "] " + c.description);
    };
    if (rep.soundness) add("soundness", *rep.soundness);
    if (rep.completeness) add("completeness", *rep.completeness);
    for (const auto& i : rep.inconsistencies) r.diagnostics.push_back(i);
  }
  if (nonblock) {
    const auto c = check_nonblocking(A, opt);
    r.extra["nonblocking"] = !c.has_value();
    r.text.push_back(std::string("nonblocking: ") + (c ? "no" : "yes"));
    if (c) {
      r.findings.push_back({{"check", "nonblocking"}, {"path", path_json(c->path)}, {"action", c->action.str()},
                            {"state", A.describe(c->state)}});
      r.text.push_back("  after [" + to_string(c->path) + "] " + c->description);
    }
  }
  if (closed) {
    if (!deterministic) {
      r.diagnostics.push_back("trace-closure check skipped: it needs a deterministic automaton");
      r.text.push_back("trace-closed: skipped");
    } else {
      const auto wit = check_trace_closed(A, opt);
      r.extra["trace_closed"] = !wit.has_value();
      r.text.push_back(std::string("trace-closed: ") + (wit ? "no" : "yes"));
      if (wit) {
        r.findings.push_back({{"check", "trace-closed"}, {"prefix", path_json(wit->prefix)},
                              {"first", wit->first.str()}, {"second", wit->second.str()},
                              {"suffix", path_json(wit->suffix)}, {"first_order_accepted", wit->first_order_accepted}});
        r.text.push_back("  " + wit->to_string());
      }
    }
  }
  r.code = r.findings.empty() ? kClean : kFindings;
  return r;
}

Report cmd_dfa_closure(const std::string& dfa_path, const std::string& dep_path) {
  Inputs in;
  auto dfa_doc = io::parse_document(in.read(dfa_path), dfa_path);
  if (!dfa_doc.contains("dfa")) throw InputError(dfa_path + ": missing section 'dfa'");
  const Dfa d = io::dfa_from_json(dfa_doc["dfa"]);
  const auto dep = io::dependence_from_json(io::parse_document(in.read(dep_path), dep_path));
  if (auto v = validate_dependence(dep, dep.actions())) throw InputError("dependence relation " + v->message());
  Report r{"dfa-closure", "dfa", io::digest(in.blob)};
  const auto wit = is_trace_closed(d, dep);
  r.extra["trace_closed"] = !wit.has_value();
  r.extra["minimal_states"] = minimize(d).num_states();
  if (wit) {
    r.findings.push_back({{"prefix", path_json(wit->prefix)}, {"first", wit->first.str()},
                          {"second", wit->second.str()}, {"suffix", path_json(wit->suffix)},
                          {"first_order_accepted", wit->first_order_accepted}});
    r.text.push_back("not trace-closed: " + wit->to_string());
  } else {
    r.text.push_back("trace-closed");
  }
  r.code = r.findings.empty() ? kClean : kFindings;
  return r;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Happens-before analyses of concurrent executions and distributed automata", "tracekit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "Machine-readable report on standard output");

  std::string log, tree, mode = "atomicity", dot, automaton, word, dfa, dependence;
  std::size_t limit = 100000;
  std::vector<std::string> gamma;
  bool table = false, det = false, locrej = false, nonblock = false, closed = false;

  auto* races = app.add_subcommand("races", "Report unordered conflicting accesses");
  races->add_option("log", log, "Event log (one JSON record per line)")->required();
  auto* atom = app.add_subcommand("atomicity", "Report transactions interleaved in happens-before");
  atom->add_option("log", log, "Event log")->required();
  auto* ser = app.add_subcommand("serializable", "Search for an equivalent serial execution");
  ser->add_option("log", log, "Event log")->required();
  ser->add_option("--limit", limit, "Maximum number of linear extensions to inspect")
      ->check(CLI::PositiveNumber);
  auto* trace = app.add_subcommand("trace", "Build the happens-before order of a log");
  trace->add_option("log", log, "Event log")->required();
  trace->add_option("--mode", mode, "Conflict relation: race or atomicity")->check(CLI::IsMember({"race", "atomicity"}));
  trace->add_option("--dot", dot, "Write the transitive reduction as DOT to this file");
  auto* gossip = app.add_subcommand("gossip", "Replay gossip over a process tree");
  gossip->add_option("log", log, "Event log")->required();
  gossip->add_option("--tree", tree, "Tree document")->required();
  gossip->add_option("--gamma", gamma, "Monitored actions (repeat or separate with ';'); default all");
  gossip->add_flag("--table", table, "Print the per-step knowledge table");
  gossip->add_option("--mode", mode, "Conflict relation: race or atomicity")->check(CLI::IsMember({"race", "atomicity"}));
  auto* zrun = app.add_subcommand("zrun", "Run a Zielonka automaton on a word");
  zrun->add_option("automaton", automaton, "Automaton document")->required();
  zrun->add_option("word", word, "Word file")->required();
  auto* zcheck = app.add_subcommand("zcheck", "Check properties of a Zielonka automaton (all when no flag given)");
  zcheck->add_option("automaton", automaton, "Automaton document")->required();
  zcheck->add_flag("--deterministic", det);
  zcheck->add_flag("--locally-rejecting", locrej);
  zcheck->add_flag("--nonblocking", nonblock);
  zcheck->add_flag("--trace-closed", closed);
  auto* closure = app.add_subcommand("dfa-closure", "Decide whether a DFA language is trace-closed");
  closure->add_option("dfa", dfa, "DFA document")->required();
  closure->add_option("dependence", dependence, "Dependence or alphabet document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kClean : kInputError;
  }

  try {
    Report r;
    if (*races) r = cmd_races(log);
    else if (*atom) r = cmd_atomicity(log);
    else if (*ser) r = cmd_serializable(log, limit);
    else if (*trace) r = cmd_trace(log, mode, dot);
    else if (*gossip) r = cmd_gossip(log, tree, gamma, table, mode);
    else if (*zrun) r = cmd_zrun(automaton, word);
    else if (*zcheck) r = cmd_zcheck(automaton, det, locrej, nonblock, closed);
    else r = cmd_dfa_closure(dfa, dependence);
    emit(r, json, out);
    return r.code;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ResourceError& e) {
    err << "resource bound: " << e.what() << "\n";
    return kResourceBound;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace tracekit::cli
