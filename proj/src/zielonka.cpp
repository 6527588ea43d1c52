#include "tracekit/zielonka.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <variant>

namespace tracekit {

std::size_t GlobalStateHash::operator()(const GlobalState& s) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (LocalState x : s) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Acceptance

struct Acceptance::Node {
  struct All {};
  struct Set {
    std::set<GlobalState> states;
  };
  struct Conj {
    Acceptance left;
    Acceptance right;
    std::vector<std::size_t> right_sizes;
  };
  std::variant<All, Set, Conj> value;
};

Acceptance Acceptance::all() {
  Acceptance a;
  a.node_ = std::make_shared<Node>(Node{Node::All{}});
  return a;
}

Acceptance Acceptance::of(std::set<GlobalState> states) {
  Acceptance a;
  a.node_ = std::make_shared<Node>(Node{Node::Set{std::move(states)}});
  return a;
}

Acceptance Acceptance::conjunction(Acceptance left, Acceptance right, std::vector<std::size_t> right_sizes) {
  Acceptance a;
  a.node_ = std::make_shared<Node>(Node{Node::Conj{std::move(left), std::move(right), std::move(right_sizes)}});
  return a;
}

bool Acceptance::accepts(const GlobalState& s) const {
  if (!node_) return false;
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Node::All>) {
          return true;
        } else if constexpr (std::is_same_v<T, Node::Set>) {
          return v.states.count(s) != 0;
        } else {
          GlobalState l(s.size()), r(s.size());
          for (std::size_t p = 0; p < s.size(); ++p) {
            l[p] = static_cast<LocalState>(s[p] / v.right_sizes[p]);
            r[p] = static_cast<LocalState>(s[p] % v.right_sizes[p]);
          }
          return v.left.accepts(l) && v.right.accepts(r);
        }
      },
      node_->value);
}

bool Acceptance::is_all() const { return node_ && std::holds_alternative<Node::All>(node_->value); }

const std::set<GlobalState>* Acceptance::explicit_states() const {
  if (!node_) return nullptr;
  if (auto* s = std::get_if<Node::Set>(&node_->value)) return &s->states;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Automaton

ZielonkaAutomaton::ZielonkaAutomaton(DistributedAlphabet alphabet, std::vector<ProcessStates> processes,
                                     std::vector<LocalTransition> transitions, Acceptance acceptance)
    : alphabet_(std::move(alphabet)),
      processes_(std::move(processes)),
      transitions_(std::move(transitions)),
      acceptance_(std::move(acceptance)) {
  if (processes_.size() != alphabet_.num_processes())
    throw StructuralError("automaton needs local states for every process of the alphabet");
  for (std::size_t p = 0; p < processes_.size(); ++p) {
    const auto& ps = processes_[p];
    const auto& name = alphabet_.processes()[p].str();
    if (ps.names.empty()) throw InputError("process " + name + " has no local states");
    if (ps.initial >= ps.size()) throw InputError("initial state of " + name + " out of range");
    for (LocalState r : ps.rejecting)
      if (r >= ps.size()) throw InputError("rejecting state of " + name + " out of range");
  }
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());

  by_action_.resize(alphabet_.num_actions());
  index_.resize(alphabet_.num_actions());
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto& t = transitions_[i];
    if (t.action >= alphabet_.num_actions()) throw InputError("transition on unknown action");
    const auto& dom = alphabet_.domain(t.action);
    if (t.pre.size() != dom.size() || t.post.size() != dom.size())
      throw StructuralError("transition on " + alphabet_.actions()[t.action].str() +
                            " is not keyed by its domain");
    for (std::size_t k = 0; k < dom.size(); ++k)
      if (t.pre[k] >= processes_[dom[k]].size() || t.post[k] >= processes_[dom[k]].size())
        throw InputError("transition on " + alphabet_.actions()[t.action].str() + " uses unknown state");
    by_action_[t.action].push_back(i);
    index_[t.action][t.pre].push_back(i);
  }
}

const std::vector<std::size_t>& ZielonkaAutomaton::matching(std::size_t action,
                                                            const std::vector<LocalState>& pre) const {
  static const std::vector<std::size_t> none;
  auto it = index_[action].find(pre);
  return it == index_[action].end() ? none : it->second;
}

GlobalState ZielonkaAutomaton::initial_state() const {
  GlobalState s(processes_.size());
  for (std::size_t p = 0; p < processes_.size(); ++p) s[p] = processes_[p].initial;
  return s;
}

bool ZielonkaAutomaton::rejecting(const GlobalState& s) const {
  for (std::size_t p = 0; p < processes_.size(); ++p)
    if (processes_[p].rejecting.count(s[p])) return true;
  return false;
}

std::optional<LocalState> ZielonkaAutomaton::local_state(std::size_t process, const std::string& name) const {
  const auto& names = processes_[process].names;
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<LocalState>(it - names.begin());
}

std::string ZielonkaAutomaton::describe(const GlobalState& s) const {
  std::string out = "{";
  for (std::size_t p = 0; p < s.size(); ++p) {
    if (p) out += ", ";
    out += alphabet_.processes()[p].str() + "=" + processes_[p].names[s[p]];
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Builder

ZielonkaBuilder::ZielonkaBuilder(DistributedAlphabet alphabet)
    : alphabet_(std::move(alphabet)), processes_(alphabet_.num_processes()) {}

ZielonkaBuilder& ZielonkaBuilder::process(const ProcessId& p, std::vector<std::string> states,
                                          const std::string& initial, const std::vector<std::string>& rejecting) {
  const std::size_t idx = alphabet_.require_process(p);
  ProcessStates ps;
  ps.names = std::move(states);
  processes_[idx] = ps;
  processes_[idx]->initial = resolve(idx, initial);
  for (const auto& r : rejecting) processes_[idx]->rejecting.insert(resolve(idx, r));
  return *this;
}

ZielonkaBuilder& ZielonkaBuilder::transition(const ActionId& a, const Assignment& pre, const Assignment& post) {
  alphabet_.require_action(a);
  pending_.push_back({a, {pre, post}});
  return *this;
}

ZielonkaBuilder& ZielonkaBuilder::accept_all() {
  accept_all_ = true;
  return *this;
}

ZielonkaBuilder& ZielonkaBuilder::accept(const Assignment& global_state) {
  accepting_.push_back(global_state);
  return *this;
}

LocalState ZielonkaBuilder::resolve(std::size_t process, const std::string& name) const {
  const auto& ps = processes_[process];
  const auto& pname = alphabet_.processes()[process].str();
  if (!ps) throw InputError("no local states declared for process " + pname);
  auto it = std::find(ps->names.begin(), ps->names.end(), name);
  if (it == ps->names.end()) throw InputError("unknown local state '" + name + "' of process " + pname);
  return static_cast<LocalState>(it - ps->names.begin());
}

std::vector<LocalState> ZielonkaBuilder::resolve(std::size_t action, const Assignment& assignment,
                                                 const char* what) const {
  const auto& dom = alphabet_.domain(action);
  const auto& aname = alphabet_.actions()[action].str();
  if (assignment.size() != dom.size())
    throw StructuralError(std::string(what) + " of transition on " + aname + " is not keyed by dom(" + aname + ")");
  std::vector<LocalState> out;
  for (std::size_t p : dom) {
    auto it = assignment.find(alphabet_.processes()[p]);
    if (it == assignment.end())
      throw StructuralError(std::string(what) + " of transition on " + aname + " misses process " +
                            alphabet_.processes()[p].str());
    out.push_back(resolve(p, it->second));
  }
  return out;
}

ZielonkaAutomaton ZielonkaBuilder::build() const {
  std::vector<ProcessStates> procs;
  for (std::size_t p = 0; p < processes_.size(); ++p) {
    if (!processes_[p]) throw InputError("no local states declared for process " + alphabet_.processes()[p].str());
    procs.push_back(*processes_[p]);
  }
  std::vector<LocalTransition> ts;
  for (const auto& [a, io] : pending_) {
    const std::size_t action = alphabet_.require_action(a);
    ts.push_back({action, resolve(action, io.first, "pre"), resolve(action, io.second, "post")});
  }
  Acceptance acc = Acceptance::all();
  if (!accept_all_) {
    std::set<GlobalState> states;
    for (const auto& g : accepting_) {
      if (g.size() != alphabet_.num_processes())
        throw StructuralError("accepting global state must assign every process");
      GlobalState s(alphabet_.num_processes());
      for (const auto& [p, name] : g) {
        const std::size_t idx = alphabet_.require_process(p);
        s[idx] = resolve(idx, name);
      }
      states.insert(std::move(s));
    }
    acc = Acceptance::of(std::move(states));
  }
  return ZielonkaAutomaton(alphabet_, std::move(procs), std::move(ts), std::move(acc));
}

// ---------------------------------------------------------------------------
// Semantics

std::vector<GlobalState> step(const ZielonkaAutomaton& A, const GlobalState& s, std::size_t action) {
  const auto& dom = A.alphabet().domain(action);
  std::vector<LocalState> pre;
  pre.reserve(dom.size());
  for (std::size_t p : dom) pre.push_back(s[p]);
  std::vector<GlobalState> out;
  for (std::size_t i : A.matching(action, pre)) {
    GlobalState next = s;
    const auto& t = A.transitions()[i];
    for (std::size_t k = 0; k < dom.size(); ++k) next[dom[k]] = t.post[k];
    out.push_back(std::move(next));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<GlobalState> step(const ZielonkaAutomaton& A, const GlobalState& s, const ActionId& a) {
  if (s.size() != A.num_processes()) throw InputError("global state does not cover every process");
  return step(A, s, A.alphabet().require_action(a));
}

std::string_view to_string(RunVerdict v) {
  switch (v) {
    case RunVerdict::accepted: return "accepted";
    case RunVerdict::rejected: return "rejected";
    case RunVerdict::stuck: return "stuck";
  }
  return "?";
}

RunResult run(const ZielonkaAutomaton& A, const Word& w) {
  std::vector<std::size_t> letters;
  for (std::size_t pos = 0; pos < w.size(); ++pos) {
    auto i = A.alphabet().action_index(w[pos]);
    if (!i) throw InputError("unknown action '" + w[pos].str() + "' at position " + std::to_string(pos + 1));
    letters.push_back(*i);
  }
  RunResult r;
  std::vector<GlobalState> current{A.initial_state()};
  for (std::size_t pos = 0; pos < letters.size(); ++pos) {
    std::vector<GlobalState> next;
    for (const auto& s : current) {
      auto succ = step(A, s, letters[pos]);
      next.insert(next.end(), succ.begin(), succ.end());
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (next.empty()) {
      r.verdict = RunVerdict::stuck;
      r.stuck_at = pos + 1;
      r.final_states = std::move(current);
      return r;
    }
    current = std::move(next);
  }
  r.verdict = std::any_of(current.begin(), current.end(), [&](const auto& s) { return A.accepting(s); })
                  ? RunVerdict::accepted
                  : RunVerdict::rejected;
  r.final_states = std::move(current);
  return r;
}

bool is_deterministic(const ZielonkaAutomaton& A) {
  for (std::size_t a = 0; a < A.alphabet().num_actions(); ++a) {
    std::set<std::vector<LocalState>> seen;
    for (std::size_t i : A.transitions_on(a))
      if (!seen.insert(A.transitions()[i].pre).second) return false;
  }
  return true;
}

Word GlobalGraph::path_to(std::size_t state, const DistributedAlphabet& alphabet) const {
  Word w;
  while (state != 0) {
    w.push_back(alphabet.actions()[parent[state].second]);
    state = parent[state].first;
  }
  std::reverse(w.begin(), w.end());
  return w;
}

GlobalGraph explore(const ZielonkaAutomaton& A, const ExplorationOptions& options) {
  GlobalGraph g;
  std::unordered_map<GlobalState, std::size_t, GlobalStateHash> index;
  auto add = [&](GlobalState s, std::size_t from, std::size_t action) {
    auto [it, fresh] = index.emplace(s, g.states.size());
    if (fresh) {
      if (g.states.size() >= options.state_budget)
        throw ResourceError("global state budget of " + std::to_string(options.state_budget) + " exceeded");
      g.states.push_back(std::move(s));
      g.successors.emplace_back();
      g.parent.emplace_back(from, action);
    }
    return it->second;
  };
  add(A.initial_state(), 0, 0);
  for (std::size_t head = 0; head < g.states.size(); ++head) {
    for (std::size_t a = 0; a < A.alphabet().num_actions(); ++a) {
      for (auto& next : step(A, g.states[head], a)) {
        std::size_t target = add(std::move(next), head, a);
        g.successors[head].emplace_back(a, target);
      }
    }
  }
  return g;
}

Dfa global_automaton(const ZielonkaAutomaton& A, const ExplorationOptions& options) {
  if (!is_deterministic(A)) throw InputError("global automaton requires a deterministic Zielonka automaton");
  const GlobalGraph g = explore(A, options);
  Dfa d(A.alphabet().actions(), g.states.size(), 0);
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    d.set_state_name(static_cast<Dfa::State>(s), A.describe(g.states[s]));
    d.set_accepting(static_cast<Dfa::State>(s), A.accepting(g.states[s]));
    for (const auto& [a, t] : g.successors[s])
      d.set_transition(static_cast<Dfa::State>(s), a, static_cast<Dfa::State>(t));
  }
  return d;
}

std::optional<ClosureWitness> check_trace_closed(const ZielonkaAutomaton& A, const ExplorationOptions& options) {
  return is_trace_closed(global_automaton(A, options), induced_dependence(A.alphabet()));
}

ZielonkaAutomaton product_processwise(const ZielonkaAutomaton& program, const ZielonkaAutomaton& monitor) {
  const auto& pa = program.alphabet();
  const auto& ma = monitor.alphabet();
  if (pa.processes() != ma.processes()) throw StructuralError("product: process sets differ");
  if (pa.actions() != ma.actions()) throw StructuralError("product: action sets differ");
  for (std::size_t a = 0; a < pa.num_actions(); ++a)
    if (pa.domain(a) != ma.domain(a))
      throw StructuralError("product: domains of " + pa.actions()[a].str() + " differ");

  const std::size_t n = pa.num_processes();
  std::vector<std::size_t> msize(n);
  std::vector<ProcessStates> procs(n);
  for (std::size_t p = 0; p < n; ++p) {
    const auto& ps = program.process(p);
    const auto& ms = monitor.process(p);
    msize[p] = ms.size();
    for (std::size_t s = 0; s < ps.size(); ++s)
      for (std::size_t m = 0; m < ms.size(); ++m) {
        procs[p].names.push_back(ps.names[s] + "|" + ms.names[m]);
        if (ms.rejecting.count(static_cast<LocalState>(m)))
          procs[p].rejecting.insert(static_cast<LocalState>(s * ms.size() + m));
      }
    procs[p].initial = static_cast<LocalState>(ps.initial * ms.size() + ms.initial);
  }

  std::vector<LocalTransition> ts;
  for (std::size_t a = 0; a < pa.num_actions(); ++a) {
    const auto& dom = pa.domain(a);
    for (std::size_t i : program.transitions_on(a))
      for (std::size_t j : monitor.transitions_on(a)) {
        const auto& tp = program.transitions()[i];
        const auto& tm = monitor.transitions()[j];
        LocalTransition t{a, {}, {}};
        for (std::size_t k = 0; k < dom.size(); ++k) {
          const auto w = static_cast<LocalState>(msize[dom[k]]);
          t.pre.push_back(tp.pre[k] * w + tm.pre[k]);
          t.post.push_back(tp.post[k] * w + tm.post[k]);
        }
        ts.push_back(std::move(t));
      }
  }
  return ZielonkaAutomaton(pa, std::move(procs), std::move(ts),
                           Acceptance::conjunction(program.acceptance(), monitor.acceptance(), msize));
}

namespace {

// live[s]: some accepting state is reachable from s.
std::vector<char> live_states(const ZielonkaAutomaton& A, const GlobalGraph& g) {
  std::vector<std::vector<std::size_t>> preds(g.states.size());
  for (std::size_t s = 0; s < g.states.size(); ++s)
    for (const auto& [a, t] : g.successors[s]) preds[t].push_back(s);
  std::vector<char> live(g.states.size(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < g.states.size(); ++s)
    if (A.accepting(g.states[s])) {
      live[s] = 1;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    for (std::size_t p : preds[s])
      if (!live[p]) {
        live[p] = 1;
        queue.push_back(p);
      }
  }
  return live;
}

}  // namespace

LocalRejectionReport check_locally_rejecting(const ZielonkaAutomaton& A, const ExplorationOptions& options) {
  const GlobalGraph g = explore(A, options);
  const auto live = live_states(A, g);
  LocalRejectionReport report;
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    const bool rejects = A.rejecting(g.states[s]);
    if (!report.soundness && rejects && live[s])
      report.soundness = StateCounterexample{g.path_to(s, A.alphabet()), g.states[s],
                                             "rejecting state " + A.describe(g.states[s]) +
                                                 " can still reach acceptance"};
    if (!report.completeness && !rejects && !live[s])
      report.completeness = StateCounterexample{g.path_to(s, A.alphabet()), g.states[s],
                                                "dead state " + A.describe(g.states[s]) +
                                                    " has no rejecting process"};
  }

  for (std::size_t p = 0; p < A.num_processes(); ++p) {
    const auto& ps = A.process(p);
    std::vector<int> seen(ps.size(), 0), seen_live(ps.size(), 0);
    for (std::size_t s = 0; s < g.states.size(); ++s) {
      seen[g.states[s][p]] = 1;
      if (live[s]) seen_live[g.states[s][p]] = 1;
    }
    for (std::size_t l = 0; l < ps.size(); ++l)
      if (seen[l] && !seen_live[l] && !ps.rejecting.count(static_cast<LocalState>(l)))
        report.inconsistencies.push_back("process " + A.alphabet().processes()[p].str() + " state '" +
                                         ps.names[l] + "' occurs only in dead global states but is not rejecting");
  }
  return report;
}

std::optional<BlockingCounterexample> check_nonblocking(const ZielonkaAutomaton& A,
                                                        const ExplorationOptions& options) {
  const GlobalGraph g = explore(A, options);
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    if (A.rejecting(g.states[s])) continue;
    std::vector<char> enabled(A.alphabet().num_actions(), 0);
    for (const auto& [a, t] : g.successors[s]) enabled[a] = 1;
    for (std::size_t a = 0; a < enabled.size(); ++a)
      if (!enabled[a]) {
        const auto& action = A.alphabet().actions()[a];
        return BlockingCounterexample{g.path_to(s, A.alphabet()), g.states[s], action,
                                      action.str() + " is disabled in " + A.describe(g.states[s])};
      }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// CAS systems

ProcessId thread_control_process(const ThreadId& t) { return ProcessId("P_" + t.str()); }
ProcessId variable_process(const VariableId& x) { return ProcessId("P_" + x.str()); }

namespace {

struct ThreadLocal {
  std::size_t pc = 0;
  std::map<std::string, std::string> values;

  friend auto operator<=>(const ThreadLocal&, const ThreadLocal&) = default;

  std::string name() const {
    std::string out = "pc=" + std::to_string(pc);
    for (const auto& [k, v] : values) out += ";" + k + "=" + v;
    return out;
  }
};

std::string instruction_label(const ThreadId& t, const SharedInstruction& ins) {
  const std::string& x = ins.variable.str();
  switch (ins.kind) {
    case SharedInstruction::Kind::read: return ins.result + "=read(" + t.str() + "," + x + ")";
    case SharedInstruction::Kind::write: return "write(" + t.str() + "," + x + "," + ins.written + ")";
    case SharedInstruction::Kind::cas:
      return ins.result + "=CAS(" + t.str() + "," + x + "," + ins.expected + "," + ins.desired + ")";
  }
  return "?";
}

}  // namespace

ZielonkaAutomaton cas_system(const CasSystemSpec& spec) {
  auto in_domain = [&](const VariableId& x, const std::string& v) {
    const auto& d = spec.variables.at(x).domain;
    return std::find(d.begin(), d.end(), v) != d.end();
  };
  for (const auto& [x, var] : spec.variables) {
    if (var.domain.empty()) throw InputError("variable " + x.str() + " has an empty value domain");
    if (!in_domain(x, var.initial))
      throw InputError("initial value '" + var.initial + "' of " + x.str() + " outside its domain");
  }

  // Action labels per (thread, pc); repeated instructions get a position suffix.
  std::map<ActionId, std::vector<ProcessId>> dom;
  std::map<ThreadId, std::vector<ActionId>> labels;
  for (const auto& [t, prog] : spec.programs) {
    for (std::size_t pc = 0; pc < prog.size(); ++pc) {
      const auto& ins = prog[pc];
      if (!spec.variables.count(ins.variable))
        throw InputError("thread " + t.str() + " uses undeclared variable " + ins.variable.str());
      if (ins.kind != SharedInstruction::Kind::write && ins.result.empty())
        throw InputError("instruction " + std::to_string(pc + 1) + " of " + t.str() + " needs a result variable");
      if (ins.kind == SharedInstruction::Kind::write && !in_domain(ins.variable, ins.written))
        throw InputError("value '" + ins.written + "' outside the domain of " + ins.variable.str());
      if (ins.kind == SharedInstruction::Kind::cas &&
          (!in_domain(ins.variable, ins.expected) || !in_domain(ins.variable, ins.desired)))
        throw InputError("CAS values outside the domain of " + ins.variable.str());
      std::string label = instruction_label(t, ins);
      ActionId a(label);
      if (dom.count(a)) a = ActionId(label + "#" + std::to_string(pc + 1));
      dom.emplace(a, std::vector<ProcessId>{thread_control_process(t), variable_process(ins.variable)});
      labels[t].push_back(a);
    }
  }
  std::vector<ProcessId> processes;
  for (const auto& [t, prog] : spec.programs) processes.push_back(thread_control_process(t));
  for (const auto& [x, var] : spec.variables) processes.push_back(variable_process(x));
  {
    auto sorted = processes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw StructuralError("thread and variable names collide");
  }
  DistributedAlphabet alphabet(processes, dom);

  std::vector<ProcessStates> procs(alphabet.num_processes());
  std::vector<LocalTransition> transitions;

  for (const auto& [x, var] : spec.variables) {
    auto& ps = procs[alphabet.require_process(variable_process(x))];
    ps.names = var.domain;
    ps.initial = static_cast<LocalState>(std::find(var.domain.begin(), var.domain.end(), var.initial) -
                                         var.domain.begin());
  }

  for (const auto& [t, prog] : spec.programs) {
    const std::size_t tp = alphabet.require_process(thread_control_process(t));
    std::map<ThreadLocal, LocalState> ids;
    std::vector<ThreadLocal> states;
    auto id_of = [&](const ThreadLocal& s) {
      auto [it, fresh] = ids.emplace(s, static_cast<LocalState>(states.size()));
      if (fresh) states.push_back(s);
      return it->second;
    };
    id_of(ThreadLocal{});
    for (std::size_t head = 0; head < states.size(); ++head) {
      const ThreadLocal cur = states[head];
      if (cur.pc >= prog.size()) continue;
      const auto& ins = prog[cur.pc];
      const std::size_t action = alphabet.require_action(labels[t][cur.pc]);
      const std::size_t xp = alphabet.require_process(variable_process(ins.variable));
      const auto& domain = spec.variables.at(ins.variable).domain;
      const bool thread_first = tp < xp;  // dom order is sorted process index order
      for (std::size_t v = 0; v < domain.size(); ++v) {
        ThreadLocal after = cur;
        after.pc += 1;
        std::size_t x_after = v;
        switch (ins.kind) {
          case SharedInstruction::Kind::read:
            after.values[ins.result] = domain[v];
            break;
          case SharedInstruction::Kind::write:
            x_after = std::find(domain.begin(), domain.end(), ins.written) - domain.begin();
            break;
          case SharedInstruction::Kind::cas:
            if (domain[v] == ins.expected) {
              after.values[ins.result] = "true";
              x_after = std::find(domain.begin(), domain.end(), ins.desired) - domain.begin();
            } else {
              after.values[ins.result] = "false";
            }
            break;
        }
        const LocalState from = ids.at(cur);
        const LocalState to = id_of(after);
        const auto xv = static_cast<LocalState>(v);
        const auto xa = static_cast<LocalState>(x_after);
        LocalTransition tr{action, {}, {}};
        tr.pre = thread_first ? std::vector<LocalState>{from, xv} : std::vector<LocalState>{xv, from};
        tr.post = thread_first ? std::vector<LocalState>{to, xa} : std::vector<LocalState>{xa, to};
        transitions.push_back(std::move(tr));
      }
    }
    auto& ps = procs[tp];
    for (const auto& s : states) ps.names.push_back(s.name());
    ps.initial = 0;
  }
  return ZielonkaAutomaton(std::move(alphabet), std::move(procs), std::move(transitions), Acceptance::all());
}

}  // namespace tracekit
