#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tracekit/dfa.hpp"
#include "tracekit/error.hpp"
#include "tracekit/gossip.hpp"
#include "tracekit/io.hpp"
#include "tracekit/monitors.hpp"
#include "tracekit/trace.hpp"
#include "tracekit/zielonka.hpp"

namespace py = pybind11;
using namespace tracekit;

namespace {

py::object to_py(const io::Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

ConflictMode parse_mode(const std::string& mode) {
  if (mode == "race") return ConflictMode::race;
  if (mode == "atomicity") return ConflictMode::atomicity;
  throw InputError("unknown mode '" + mode + "' (expected race or atomicity)");
}

Word to_word(const std::vector<std::string>& letters) {
  Word w;
  for (const auto& l : letters) w.emplace_back(l);
  return w;
}

std::vector<std::string> from_word(const Word& w) {
  std::vector<std::string> out;
  for (const auto& a : w) out.push_back(a.str());
  return out;
}

DependenceRelation dependence(const std::vector<std::string>& actions,
                              const std::vector<std::pair<std::string, std::string>>& dependent) {
  std::vector<std::pair<ActionId, ActionId>> pairs;
  for (const auto& [a, b] : dependent) pairs.emplace_back(a, b);
  return DependenceRelation::from_pairs(to_word(actions), pairs);
}

ExplorationOptions budget(std::size_t states) {
  ExplorationOptions o;
  o.state_budget = states;
  return o;
}

py::dict witness_dict(const ClosureWitness& w) {
  py::dict d;
  d["prefix"] = from_word(w.prefix);
  d["first"] = w.first.str();
  d["second"] = w.second.str();
  d["suffix"] = from_word(w.suffix);
  d["first_order_accepted"] = w.first_order_accepted;
  return d;
}

py::object optional_witness(const std::optional<ClosureWitness>& w) {
  return w ? py::object(witness_dict(*w)) : py::object(py::none());
}

py::object counterexample(const std::optional<StateCounterexample>& c) {
  if (!c) return py::none();
  py::dict d;
  d["path"] = from_word(c->path);
  d["state"] = c->description;
  return d;
}

}  // namespace

PYBIND11_MODULE(_tracekit, m) {
  m.doc() = "Trace-theoretic analysis of concurrent executions";
  static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
  static py::exception<ResourceError> resource_error(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      py::set_error(input_error, e.what());
    } catch (const ResourceError& e) {
      py::set_error(resource_error, e.what());
    }
  });

  py::class_<ProgramExecution>(m, "Execution")
      .def("__len__", &ProgramExecution::size)
      .def("word", [](const ProgramExecution& e) { return from_word(e.word()); })
      .def("display_id", &ProgramExecution::display_id, py::arg("event"))
      .def("to_jsonl", [](const ProgramExecution& e) { return io::serialize_log(e); });

  m.def("parse_log", [](const std::string& text) { return io::parse_log(text); }, py::arg("text"),
        "Parse a JSON-lines execution log.");

  m.def(
      "detect_races",
      [](const ProgramExecution& exec) {
        py::list out;
        for (const auto& r : detect_races(exec)) out.append(to_py(io::to_json(r, exec)));
        return out;
      },
      py::arg("execution"));

  m.def(
      "detect_atomicity_violations",
      [](const ProgramExecution& exec) {
        py::list out;
        for (const auto& v : detect_atomicity_violations(exec)) out.append(to_py(io::to_json(v, exec)));
        return out;
      },
      py::arg("execution"));

  m.def(
      "is_serializable",
      [](const ProgramExecution& exec, std::size_t limit) {
        auto v = is_serializable(exec, limit);
        py::dict d;
        d["verdict"] = std::string(to_string(v.verdict));
        d["extensions_checked"] = v.extensions_checked;
        if (v.witness) {
          std::vector<std::string> ids;
          for (auto e : *v.witness) ids.push_back(exec.display_id(e));
          d["witness"] = ids;
        } else {
          d["witness"] = py::none();
        }
        return d;
      },
      py::arg("execution"), py::arg("limit") = 100000);

  m.def(
      "happens_before",
      [](const ProgramExecution& exec, const std::string& mode) {
        auto t = program_trace(exec, parse_mode(mode));
        std::vector<std::pair<std::string, std::string>> edges;
        for (auto [a, b] : t.edges()) edges.emplace_back(exec.display_id(a), exec.display_id(b));
        return edges;
      },
      py::arg("execution"), py::arg("mode") = "atomicity", "Covering edges of the happens-before order.");

  m.def(
      "trace_dot", [](const ProgramExecution& exec, const std::string& mode) {
        return export_dot(program_trace(exec, parse_mode(mode)));
      },
      py::arg("execution"), py::arg("mode") = "atomicity");

  m.def(
      "foata_normal_form",
      [](const std::vector<std::string>& word, const std::vector<std::string>& actions,
         const std::vector<std::pair<std::string, std::string>>& dependent) {
        std::vector<std::vector<std::string>> steps;
        for (const auto& s : foata_normal_form(to_word(word), dependence(actions, dependent)).labels)
          steps.push_back(from_word(s));
        return steps;
      },
      py::arg("word"), py::arg("actions"), py::arg("dependent"));

  m.def(
      "trace_equivalent",
      [](const std::vector<std::string>& u, const std::vector<std::string>& v, const std::vector<std::string>& actions,
         const std::vector<std::pair<std::string, std::string>>& dependent) {
        return trace_equivalent(to_word(u), to_word(v), dependence(actions, dependent));
      },
      py::arg("u"), py::arg("v"), py::arg("actions"), py::arg("dependent"));

  m.def(
      "gossip_replay",
      [](const ProgramExecution& exec, const std::string& tree_json, std::optional<std::vector<std::string>> gamma,
         const std::string& mode) {
        auto alpha = standard_alphabet(exec, parse_mode(mode));
        auto doc = io::parse_document(tree_json, "tree");
        auto tree = io::tree_from_json(doc.contains("tree") ? doc["tree"] : doc);
        std::vector<ActionId> g = gamma ? to_word(*gamma) : alpha.actions();
        auto snaps = replay(exec.word(), alpha, tree, g);
        py::list out;
        for (const auto& s : snaps) {
          py::dict row;
          for (const auto& p : alpha.processes()) row[py::str(p.str())] = to_py(io::to_json(s.knowledge(p)));
          out.append(row);
        }
        return py::make_tuple(out, io::gossip_table(snaps, exec.word(), &exec));
      },
      py::arg("execution"), py::arg("tree_json"), py::arg("gamma") = py::none(), py::arg("mode") = "atomicity",
      "Knowledge of every process before and after each event, plus the rendered table.");

  py::class_<ZielonkaAutomaton>(m, "Automaton")
      .def_static(
          "from_json", [](const std::string& text) { return io::automaton_from_json(io::parse_document(text, "automaton")); },
          py::arg("text"))
      .def("to_json", [](const ZielonkaAutomaton& A) { return io::to_json(A).dump(); })
      .def_property_readonly("processes", [](const ZielonkaAutomaton& A) {
        std::vector<std::string> out;
        for (const auto& p : A.alphabet().processes()) out.push_back(p.str());
        return out;
      });

  m.def(
      "run",
      [](const ZielonkaAutomaton& A, const std::vector<std::string>& word) {
        auto r = run(A, to_word(word));
        py::dict d;
        d["verdict"] = std::string(to_string(r.verdict));
        d["stuck_at"] = r.stuck_at ? py::object(py::int_(*r.stuck_at)) : py::object(py::none());
        std::vector<std::string> finals;
        for (const auto& s : r.final_states) finals.push_back(A.describe(s));
        d["final_states"] = finals;
        return d;
      },
      py::arg("automaton"), py::arg("word"));

  m.def("is_deterministic", &is_deterministic, py::arg("automaton"));

  m.def(
      "check_trace_closed",
      [](const ZielonkaAutomaton& A, std::size_t states) { return optional_witness(check_trace_closed(A, budget(states))); },
      py::arg("automaton"), py::arg("state_budget") = 1'000'000);

  m.def(
      "check_locally_rejecting",
      [](const ZielonkaAutomaton& A, std::size_t states) {
        auto r = check_locally_rejecting(A, budget(states));
        py::dict d;
        d["ok"] = r.ok();
        d["soundness"] = counterexample(r.soundness);
        d["completeness"] = counterexample(r.completeness);
        d["inconsistencies"] = r.inconsistencies;
        return d;
      },
      py::arg("automaton"), py::arg("state_budget") = 1'000'000);

  m.def(
      "check_nonblocking",
      [](const ZielonkaAutomaton& A, std::size_t states) -> py::object {
        auto c = check_nonblocking(A, budget(states));
        if (!c) return py::none();
        py::dict d;
        d["path"] = from_word(c->path);
        d["state"] = c->description;
        d["action"] = c->action.str();
        return d;
      },
      py::arg("automaton"), py::arg("state_budget") = 1'000'000);

  m.def(
      "dfa_is_trace_closed",
      [](const std::string& dfa_json, const std::string& dependence_json) {
        auto doc = io::parse_document(dfa_json, "dfa");
        auto d = io::dfa_from_json(doc.contains("dfa") ? doc["dfa"] : doc);
        auto dep = io::dependence_from_json(io::parse_document(dependence_json, "dependence"));
        return optional_witness(is_trace_closed(d, dep));
      },
      py::arg("dfa_json"), py::arg("dependence_json"),
      "None when the language is trace-closed, otherwise a diamond witness.");

  m.def("digest", [](const std::string& bytes) { return io::digest(bytes); }, py::arg("data"));
}
