#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tracekit/dfa.hpp"
#include "tracekit/gossip.hpp"
#include "tracekit/monitors.hpp"
#include "tracekit/program.hpp"
#include "tracekit/zielonka.hpp"

namespace tracekit::io {

using Json = nlohmann::ordered_json;

// Event logs: one JSON object per non-empty line with keys
// tid, op, var, lock, old, new, value, label.
ProgramExecution parse_log(std::string_view text);
// Canonical form: fixed key order, compact objects, one per line.
std::string serialize_log(const ProgramExecution& exec);

// Whitespace-separated action names, or a JSON array of strings.
Word parse_word(std::string_view text);

Json parse_document(std::string_view text, std::string_view what);

// Configuration documents are JSON objects with named sections:
//   "alphabet":   {"processes": [...], "actions": {"a": ["p", ...], ...}}
//   "dependence": {"actions": [...], "pairs": [["a", "b"], ...]}
//   "tree":       {"root": "p", "edges": [["parent", "child"], ...]}
//   "dfa":        {"alphabet": [...], "states": [...], "initial": "q",
//                  "accepting": [...], "transitions": [["q", "a", "q'"], ...]}
//   "automaton":  {"processes": {"p": {"states": [...], "initial": "s", "rejecting": [...]}},
//                  "transitions": [{"action": "a", "pre": {...}, "post": {...}}],
//                  "accepting": "all" | [{"p": "s", ...}, ...]}   (needs "alphabet")
//   "cas_system": {"variables": {"x": {"domain": [...], "initial": "v"}},
//                  "programs": {"T": [{"op": "cas", "var": "x", "old": "a", "new": "b", "result": "y"},
//                                     {"op": "read", "var": "x", "result": "r"},
//                                     {"op": "write", "var": "x", "value": "v"}]}}
DistributedAlphabet alphabet_from_json(const Json& section);
DependenceRelation dependence_from_json(const Json& doc);  // "dependence" or induced from "alphabet"
ProcessTree tree_from_json(const Json& section);
Dfa dfa_from_json(const Json& section);
CasSystemSpec cas_system_from_json(const Json& section);
ZielonkaAutomaton automaton_from_json(const Json& doc);    // "automaton" + "alphabet", or "cas_system"

Json to_json(const DistributedAlphabet& alphabet);
Json to_json(const ZielonkaAutomaton& automaton);  // document with "alphabet" and "automaton"
Json to_json(const KnowledgeDag& dag);
Json to_json(const RaceReport& r, const ProgramExecution& exec);
Json to_json(const AtomicityViolation& v, const ProgramExecution& exec);

// One column per step, one row per process; "..." marks an unchanged cell, "∅" an empty one.
std::string gossip_table(const std::vector<GossipState>& snapshots, const Word& w,
                         const ProgramExecution* exec = nullptr);

// Stable 64-bit FNV-1a digest, rendered as "fnv1a64:<hex>".
std::string digest(std::string_view bytes);

}  // namespace tracekit::io
