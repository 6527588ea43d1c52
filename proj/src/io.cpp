#include "tracekit/io.hpp"

#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <set>
#include <sstream>

namespace tracekit::io {

namespace {

std::string get_string(const Json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (v.is_number_integer()) return v.dump();
  if (!v.is_string()) throw InputError(where + "field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> opt_string(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return get_string(obj, key, where);
}

std::vector<std::string> string_list(const Json& v, const std::string& what) {
  if (!v.is_array()) throw InputError(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) throw InputError(what + " must be an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

const Json& section(const Json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) throw InputError(std::string("missing section '") + name + "'");
  return doc.at(name);
}

}  // namespace

ProgramExecution parse_log(std::string_view text) {
  static const std::set<std::string> known{"tid", "op", "var", "lock", "old", "new", "value", "label"};
  std::vector<ProgramEvent> events;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    try {
      Json rec = Json::parse(line);
      if (!rec.is_object()) throw InputError("record must be a JSON object");
      for (const auto& [key, value] : rec.items())
        if (!known.count(key)) throw InputError("unknown field '" + key + "'");
      if (!rec.contains("tid")) throw InputError("missing field 'tid'");
      if (!rec.contains("op")) throw InputError("missing field 'op'");
      ProgramEvent e;
      e.thread = ThreadId(get_string(rec, "tid", ""));
      const std::string op = get_string(rec, "op", "");
      auto parsed = parse_op(op);
      if (!parsed) throw InputError("unknown op '" + op + "'");
      e.op = *parsed;
      if (auto v = opt_string(rec, "var", "")) e.variable = VariableId(*v);
      if (auto v = opt_string(rec, "lock", "")) e.lock = LockId(*v);
      e.cas_old = opt_string(rec, "old", "");
      e.cas_new = opt_string(rec, "new", "");
      e.value = opt_string(rec, "value", "");
      e.label = opt_string(rec, "label", "");
      e.check_fields();
      events.push_back(std::move(e));
    } catch (const Json::exception& err) {
      throw InputError(where + err.what());
    } catch (const InputError& err) {
      throw InputError(where + err.what());
    }
  }
  return ProgramExecution::from_events(std::move(events));
}

std::string serialize_log(const ProgramExecution& exec) {
  std::string out;
  for (const auto& e : exec.events) {
    Json rec;
    rec["tid"] = e.thread.str();
    rec["op"] = std::string(to_string(e.op));
    if (e.variable) rec["var"] = e.variable->str();
    if (e.lock) rec["lock"] = e.lock->str();
    if (e.cas_old) rec["old"] = *e.cas_old;
    if (e.cas_new) rec["new"] = *e.cas_new;
    if (e.value) rec["value"] = *e.value;
    if (e.label) rec["label"] = *e.label;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

Word parse_word(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  Word w;
  if (first != std::string_view::npos && text[first] == '[') {
    for (const auto& s : string_list(parse_document(text, "word"), "word")) w.emplace_back(s);
    return w;
  }
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) w.emplace_back(tok);
  return w;
}

Json parse_document(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& err) {
    throw InputError(std::string(what) + ": " + err.what());
  }
}

DistributedAlphabet alphabet_from_json(const Json& sec) {
  try {
    std::vector<ProcessId> procs;
    for (const auto& p : string_list(sec.at("processes"), "alphabet.processes")) procs.emplace_back(p);
    std::map<ActionId, std::vector<ProcessId>> dom;
    for (const auto& [a, d] : sec.at("actions").items()) {
      std::vector<ProcessId> ps;
      for (const auto& p : string_list(d, "domain of " + a)) ps.emplace_back(p);
      dom.emplace(ActionId(a), std::move(ps));
    }
    return DistributedAlphabet(std::move(procs), dom);
  } catch (const Json::exception& err) {
    throw InputError(std::string("alphabet: ") + err.what());
  }
}

DependenceRelation dependence_from_json(const Json& doc) {
  if (doc.is_object() && doc.contains("alphabet") && !doc.contains("dependence"))
    return induced_dependence(alphabet_from_json(doc.at("alphabet")));
  const Json& sec = section(doc, "dependence");
  try {
    std::vector<ActionId> actions;
    for (const auto& a : string_list(sec.at("actions"), "dependence.actions")) actions.emplace_back(a);
    std::vector<std::pair<ActionId, ActionId>> pairs;
    if (sec.contains("pairs"))
      for (const auto& p : sec.at("pairs")) {
        auto pair = string_list(p, "dependence pair");
        if (pair.size() != 2) throw InputError("dependence pair must have two actions");
        pairs.emplace_back(ActionId(pair[0]), ActionId(pair[1]));
      }
    return DependenceRelation::from_pairs(std::move(actions), pairs);
  } catch (const Json::exception& err) {
    throw InputError(std::string("dependence: ") + err.what());
  }
}

ProcessTree tree_from_json(const Json& sec) {
  try {
    std::vector<std::pair<ProcessId, ProcessId>> edges;
    for (const auto& e : sec.at("edges")) {
      auto pair = string_list(e, "tree edge");
      if (pair.size() != 2) throw InputError("tree edge must be [parent, child]");
      edges.emplace_back(ProcessId(pair[0]), ProcessId(pair[1]));
    }
    return ProcessTree::from_edges(ProcessId(get_string(sec, "root", "tree: ")), edges);
  } catch (const Json::exception& err) {
    throw InputError(std::string("tree: ") + err.what());
  }
}

Dfa dfa_from_json(const Json& sec) {
  try {
    std::vector<ActionId> letters;
    for (const auto& a : string_list(sec.at("alphabet"), "dfa.alphabet")) letters.emplace_back(a);
    const auto states = string_list(sec.at("states"), "dfa.states");
    std::map<std::string, Dfa::State> id;
    for (const auto& s : states)
      if (!id.emplace(s, static_cast<Dfa::State>(id.size())).second) throw InputError("duplicate DFA state " + s);
    auto lookup = [&](const std::string& s) {
      auto it = id.find(s);
      if (it == id.end()) throw InputError("unknown DFA state " + s);
      return it->second;
    };
    if (states.empty()) throw InputError("DFA needs at least one state");
    Dfa d(letters, states.size(), lookup(get_string(sec, "initial", "dfa: ")));
    for (std::size_t i = 0; i < states.size(); ++i) d.set_state_name(static_cast<Dfa::State>(i), states[i]);
    for (const auto& s : string_list(sec.at("accepting"), "dfa.accepting")) d.set_accepting(lookup(s));
    for (const auto& t : sec.at("transitions")) {
      auto triple = string_list(t, "dfa transition");
      if (triple.size() != 3) throw InputError("DFA transition must be [from, letter, to]");
      d.set_transition(lookup(triple[0]), ActionId(triple[1]), lookup(triple[2]));
    }
    return d;
  } catch (const Json::exception& err) {
    throw InputError(std::string("dfa: ") + err.what());
  }
}

CasSystemSpec cas_system_from_json(const Json& sec) {
  try {
    CasSystemSpec spec;
    for (const auto& [x, v] : sec.at("variables").items())
      spec.variables.emplace(VariableId(x), SharedVariable{string_list(v.at("domain"), "domain of " + x),
                                                           get_string(v, "initial", x + ": ")});
    for (const auto& [t, prog] : sec.at("programs").items()) {
      auto& out = spec.programs[ThreadId(t)];
      for (const auto& ins : prog) {
        const std::string where = "program " + t + ": ";
        SharedInstruction si;
        const std::string op = get_string(ins, "op", where);
        si.variable = VariableId(get_string(ins, "var", where));
        if (op == "read") {
          si.kind = SharedInstruction::Kind::read;
          si.result = get_string(ins, "result", where);
        } else if (op == "write") {
          si.kind = SharedInstruction::Kind::write;
          si.written = get_string(ins, "value", where);
        } else if (op == "cas") {
          si.kind = SharedInstruction::Kind::cas;
          si.result = get_string(ins, "result", where);
          si.expected = get_string(ins, "old", where);
          si.desired = get_string(ins, "new", where);
        } else {
          throw InputError(where + "unknown instruction '" + op + "'");
        }
        out.push_back(std::move(si));
      }
    }
    return spec;
  } catch (const Json::exception& err) {
    throw InputError(std::string("cas_system: ") + err.what());
  }
}

ZielonkaAutomaton automaton_from_json(const Json& doc) {
  if (doc.is_object() && doc.contains("cas_system")) return cas_system(cas_system_from_json(doc.at("cas_system")));
  const DistributedAlphabet alphabet = alphabet_from_json(section(doc, "alphabet"));
  const Json& sec = section(doc, "automaton");
  try {
    auto assignment = [](const Json& obj) {
      ZielonkaBuilder::Assignment out;
      for (const auto& [p, s] : obj.items()) {
        if (!s.is_string()) throw InputError("local state of " + p + " must be a string");
        out.emplace(ProcessId(p), s.get<std::string>());
      }
      return out;
    };
    ZielonkaBuilder b(alphabet);
    for (const auto& [p, ps] : sec.at("processes").items()) {
      std::vector<std::string> rejecting;
      if (ps.contains("rejecting")) rejecting = string_list(ps.at("rejecting"), "rejecting states of " + p);
      b.process(ProcessId(p), string_list(ps.at("states"), "states of " + p),
                get_string(ps, "initial", p + ": "), rejecting);
    }
    if (sec.contains("transitions"))
      for (const auto& t : sec.at("transitions"))
        b.transition(ActionId(get_string(t, "action", "transition: ")), assignment(t.at("pre")),
                     assignment(t.at("post")));
    const Json& acc = sec.at("accepting");
    if (acc.is_string() && acc.get<std::string>() == "all") {
      b.accept_all();
    } else if (acc.is_array()) {
      for (const auto& g : acc) b.accept(assignment(g));
    } else {
      throw InputError("automaton.accepting must be \"all\" or a list of global states");
    }
    return b.build();
  } catch (const Json::exception& err) {
    throw InputError(std::string("automaton: ") + err.what());
  }
}

Json to_json(const DistributedAlphabet& alphabet) {
  Json sec;
  sec["processes"] = Json::array();
  for (const auto& p : alphabet.processes()) sec["processes"].push_back(p.str());
  sec["actions"] = Json::object();
  for (std::size_t a = 0; a < alphabet.num_actions(); ++a) {
    Json dom = Json::array();
    for (std::size_t p : alphabet.domain(a)) dom.push_back(alphabet.processes()[p].str());
    sec["actions"][alphabet.actions()[a].str()] = dom;
  }
  return sec;
}

Json to_json(const ZielonkaAutomaton& A) {
  const auto& alpha = A.alphabet();
  Json doc;
  doc["alphabet"] = to_json(alpha);
  Json sec;
  sec["processes"] = Json::object();
  for (std::size_t p = 0; p < A.num_processes(); ++p) {
    const auto& ps = A.process(p);
    Json j;
    j["states"] = ps.names;
    j["initial"] = ps.names[ps.initial];
    j["rejecting"] = Json::array();
    for (LocalState r : ps.rejecting) j["rejecting"].push_back(ps.names[r]);
    sec["processes"][alpha.processes()[p].str()] = j;
  }
  sec["transitions"] = Json::array();
  for (const auto& t : A.transitions()) {
    Json j;
    j["action"] = alpha.actions()[t.action].str();
    const auto& dom = alpha.domain(t.action);
    for (std::size_t k = 0; k < dom.size(); ++k) {
      const auto& pname = alpha.processes()[dom[k]].str();
      j["pre"][pname] = A.process(dom[k]).names[t.pre[k]];
      j["post"][pname] = A.process(dom[k]).names[t.post[k]];
    }
    sec["transitions"].push_back(j);
  }
  if (A.acceptance().is_all()) {
    sec["accepting"] = "all";
  } else if (const auto* states = A.acceptance().explicit_states()) {
    sec["accepting"] = Json::array();
    for (const auto& g : *states) {
      Json j;
      for (std::size_t p = 0; p < g.size(); ++p) j[alpha.processes()[p].str()] = A.process(p).names[g[p]];
      sec["accepting"].push_back(j);
    }
  } else {
    throw InputError("acceptance condition has no explicit form; enumerate it through global_automaton");
  }
  doc["automaton"] = sec;
  return doc;
}

Json to_json(const KnowledgeDag& dag) {
  Json j;
  j["nodes"] = Json::array();
  for (const auto& n : dag.nodes()) j["nodes"].push_back({{"action", n.action.str()}, {"event", n.event}});
  j["edges"] = Json::array();
  for (const auto& [x, y] : dag.edges()) j["edges"].push_back({x, y});
  return j;
}

Json to_json(const RaceReport& r, const ProgramExecution& exec) {
  Json j;
  j["first"] = r.first;
  j["second"] = r.second;
  j["first_label"] = exec.display_id(r.first);
  j["second_label"] = exec.display_id(r.second);
  j["variable"] = r.variable.str();
  j["kinds"] = {std::string(to_string(r.first_op)), std::string(to_string(r.second_op))};
  return j;
}

Json to_json(const AtomicityViolation& v, const ProgramExecution& exec) {
  Json j;
  j["thread"] = v.thread.str();
  j["begin"] = v.begin;
  j["end"] = v.end ? Json(*v.end) : Json("open");
  j["interloper"] = v.interloper;
  j["interloper_thread"] = v.interloper_thread.str();
  j["begin_label"] = exec.display_id(v.begin);
  j["end_label"] = v.end ? exec.display_id(*v.end) : "open";
  j["interloper_label"] = exec.display_id(v.interloper);
  return j;
}

std::string gossip_table(const std::vector<GossipState>& snapshots, const Word& w, const ProgramExecution* exec) {
  if (snapshots.empty()) return {};
  const auto& procs = snapshots.front().alphabet().processes();
  // Rows follow a depth-first walk of the tree so neighbours stay adjacent.
  std::vector<ProcessId> rows;
  const auto& tree = snapshots.front().tree();
  std::vector<ProcessId> stack{tree.root()};
  while (!stack.empty()) {
    ProcessId p = stack.back();
    stack.pop_back();
    rows.push_back(p);
    const auto& ch = tree.children(p);
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  (void)procs;

  auto cell = [](const KnowledgeDag& d) {
    if (d.empty()) return std::string("∅");
    std::string out;
    std::set<EventId> touched;
    auto name = [&](EventId e) {
      for (const auto& n : d.nodes())
        if (n.event == e) return n.action.str();
      return std::string("?");
    };
    for (const auto& [x, y] : d.edges()) {
      if (!out.empty()) out += ", ";
      out += name(x) + "->" + name(y);
      touched.insert(x);
      touched.insert(y);
    }
    for (const auto& n : d.nodes())
      if (!touched.count(n.event)) {
        if (!out.empty()) out += ", ";
        out += n.action.str();
      }
    return out;
  };

  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"process"};
  for (std::size_t i = 1; i < snapshots.size(); ++i) {
    std::string col = exec ? exec->display_id(i) : std::to_string(i);
    header.push_back(col + ":" + w[i - 1].str());
  }
  grid.push_back(header);
  for (const auto& p : rows) {
    std::vector<std::string> row{p.str()};
    for (std::size_t i = 1; i < snapshots.size(); ++i) {
      const auto& now = snapshots[i].knowledge(p);
      const bool changed = i == 1 ? true : !(now == snapshots[i - 1].knowledge(p));
      row.push_back(changed || i == 1 ? cell(now) : "...");
    }
    grid.push_back(row);
  }

  auto width = [](const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s)
      if ((c & 0xC0) != 0x80) ++n;
    return n;
  };
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : grid)
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], width(row[c]));
  std::string out;
  for (const auto& row : grid) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += " | ";
      line += row[c];
      if (c + 1 < row.size()) line.append(widths[c] - width(row[c]), ' ');
    }
    out += line + "\n";
  }
  return out;
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tracekit::io
