#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tracekit/alphabet.hpp"
#include "tracekit/dfa.hpp"

namespace tracekit {

using LocalState = std::uint32_t;
// One local state per process, indexed like DistributedAlphabet::processes().
using GlobalState = std::vector<LocalState>;

struct GlobalStateHash {
  std::size_t operator()(const GlobalState& s) const noexcept;
};

struct ProcessStates {
  std::vector<std::string> names;
  LocalState initial = 0;
  std::set<LocalState> rejecting;

  std::size_t size() const { return names.size(); }
};

// pre/post are indexed like alphabet.domain(action).
struct LocalTransition {
  std::size_t action = 0;
  std::vector<LocalState> pre;
  std::vector<LocalState> post;

  friend bool operator==(const LocalTransition&, const LocalTransition&) = default;
  friend auto operator<=>(const LocalTransition&, const LocalTransition&) = default;
};

// Set of accepting global states: everything, an explicit set, or the conjunction of
// two acceptance conditions over a process-wise product.
class Acceptance {
public:
  static Acceptance all();
  static Acceptance of(std::set<GlobalState> states);
  // Product local state index = left * right_sizes[p] + right.
  static Acceptance conjunction(Acceptance left, Acceptance right, std::vector<std::size_t> right_sizes);

  bool accepts(const GlobalState& s) const;
  bool is_all() const;
  // Explicit states, for explicit-set conditions only.
  const std::set<GlobalState>* explicit_states() const;

private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

class ZielonkaAutomaton {
public:
  ZielonkaAutomaton(DistributedAlphabet alphabet, std::vector<ProcessStates> processes,
                    std::vector<LocalTransition> transitions, Acceptance acceptance);

  const DistributedAlphabet& alphabet() const { return alphabet_; }
  std::size_t num_processes() const { return processes_.size(); }
  const ProcessStates& process(std::size_t p) const { return processes_[p]; }
  const std::vector<LocalTransition>& transitions() const { return transitions_; }
  const Acceptance& acceptance() const { return acceptance_; }

  // Indices into transitions() for `action` whose pre matches `pre`.
  const std::vector<std::size_t>& matching(std::size_t action, const std::vector<LocalState>& pre) const;
  const std::vector<std::size_t>& transitions_on(std::size_t action) const { return by_action_[action]; }

  GlobalState initial_state() const;
  bool accepting(const GlobalState& s) const { return acceptance_.accepts(s); }
  // Some process sits in its rejecting set.
  bool rejecting(const GlobalState& s) const;
  std::optional<LocalState> local_state(std::size_t process, const std::string& name) const;
  std::string describe(const GlobalState& s) const;

private:
  DistributedAlphabet alphabet_;
  std::vector<ProcessStates> processes_;
  std::vector<LocalTransition> transitions_;
  Acceptance acceptance_;
  std::vector<std::vector<std::size_t>> by_action_;
  std::vector<std::map<std::vector<LocalState>, std::vector<std::size_t>>> index_;
};

// Assembles an automaton from state names; every pre/post map must be keyed by
// exactly dom(a).
class ZielonkaBuilder {
public:
  using Assignment = std::map<ProcessId, std::string>;

  explicit ZielonkaBuilder(DistributedAlphabet alphabet);

  ZielonkaBuilder& process(const ProcessId& p, std::vector<std::string> states, const std::string& initial,
                           const std::vector<std::string>& rejecting = {});
  ZielonkaBuilder& transition(const ActionId& a, const Assignment& pre, const Assignment& post);
  ZielonkaBuilder& accept_all();
  ZielonkaBuilder& accept(const Assignment& global_state);

  ZielonkaAutomaton build() const;

private:
  LocalState resolve(std::size_t process, const std::string& name) const;
  std::vector<LocalState> resolve(std::size_t action, const Assignment& assignment, const char* what) const;

  DistributedAlphabet alphabet_;
  std::vector<std::optional<ProcessStates>> processes_;
  std::vector<std::pair<ActionId, std::pair<Assignment, Assignment>>> pending_;
  std::vector<Assignment> accepting_;
  bool accept_all_ = false;
};

struct ExplorationOptions {
  std::size_t state_budget = 1'000'000;
};

// Successor global states on `a` (sorted); empty iff `a` is not enabled.
std::vector<GlobalState> step(const ZielonkaAutomaton& A, const GlobalState& s, const ActionId& a);
std::vector<GlobalState> step(const ZielonkaAutomaton& A, const GlobalState& s, std::size_t action);

enum class RunVerdict { accepted, rejected, stuck };

std::string_view to_string(RunVerdict v);

struct RunResult {
  RunVerdict verdict = RunVerdict::rejected;
  std::optional<EventId> stuck_at;  // position of the first letter with no transition
  std::vector<GlobalState> final_states;
};

RunResult run(const ZielonkaAutomaton& A, const Word& w);

bool is_deterministic(const ZielonkaAutomaton& A);

// Reachable part of the global automaton, in breadth-first order from the initial state.
struct GlobalGraph {
  std::vector<GlobalState> states;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> successors;  // (action, target)
  std::vector<std::pair<std::size_t, std::size_t>> parent;                   // (source, action)

  Word path_to(std::size_t state, const DistributedAlphabet& alphabet) const;
};

GlobalGraph explore(const ZielonkaAutomaton& A, const ExplorationOptions& options = {});

Dfa global_automaton(const ZielonkaAutomaton& A, const ExplorationOptions& options = {});

std::optional<ClosureWitness> check_trace_closed(const ZielonkaAutomaton& A,
                                                 const ExplorationOptions& options = {});

ZielonkaAutomaton product_processwise(const ZielonkaAutomaton& program, const ZielonkaAutomaton& monitor);

struct StateCounterexample {
  Word path;
  GlobalState state;
  std::string description;
};

struct LocalRejectionReport {
  // A reachable global state with a rejecting process from which acceptance is reachable.
  std::optional<StateCounterexample> soundness;
  // A reachable dead global state in which no process rejects.
  std::optional<StateCounterexample> completeness;
  // Non-rejecting local states that only ever occur in dead global states.
  std::vector<std::string> inconsistencies;

  bool ok() const { return !soundness && !completeness; }
};

// Evaluated over reachable global states, which over-approximates what each process
// can know locally.
LocalRejectionReport check_locally_rejecting(const ZielonkaAutomaton& A,
                                             const ExplorationOptions& options = {});

struct BlockingCounterexample {
  Word path;
  GlobalState state;
  ActionId action;
  std::string description;
};

std::optional<BlockingCounterexample> check_nonblocking(const ZielonkaAutomaton& A,
                                                        const ExplorationOptions& options = {});

// Straight-line thread programs over shared variables with finite value domains.
struct SharedInstruction {
  enum class Kind { read, write, cas };
  Kind kind = Kind::read;
  VariableId variable;
  std::string result;    // local variable receiving the read value / CAS outcome
  std::string written;   // write
  std::string expected;  // cas
  std::string desired;   // cas
};

struct SharedVariable {
  std::vector<std::string> domain;
  std::string initial;
};

struct CasSystemSpec {
  std::map<VariableId, SharedVariable> variables;
  std::map<ThreadId, std::vector<SharedInstruction>> programs;
};

ProcessId thread_control_process(const ThreadId& t);
ProcessId variable_process(const VariableId& x);

// Process P_T per thread (program counter and local valuation) and P_x per variable
// (its current value); each instruction is a rendez-vous of P_T and P_x with one
// transition per current value of x. All global states accept.
ZielonkaAutomaton cas_system(const CasSystemSpec& spec);

}  // namespace tracekit
