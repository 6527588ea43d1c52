#include "tracekit/program.hpp"

#include <map>

namespace tracekit {

std::string_view to_string(Op op) {
  switch (op) {
    case Op::read: return "read";
    case Op::write: return "write";
    case Op::acquire: return "acquire";
    case Op::release: return "release";
    case Op::begin: return "begin";
    case Op::end: return "end";
    case Op::cas: return "cas";
  }
  return "?";
}

std::optional<Op> parse_op(std::string_view text) {
  for (Op op : {Op::read, Op::write, Op::acquire, Op::release, Op::begin, Op::end, Op::cas})
    if (to_string(op) == text) return op;
  return std::nullopt;
}

std::string_view to_string(ConflictMode mode) {
  return mode == ConflictMode::race ? "race" : "atomicity";
}

ProgramEvent ProgramEvent::read(ThreadId t, VariableId x) {
  ProgramEvent e;
  e.thread = std::move(t);
  e.op = Op::read;
  e.variable = std::move(x);
  return e;
}

ProgramEvent ProgramEvent::write(ThreadId t, VariableId x) {
  ProgramEvent e = read(std::move(t), std::move(x));
  e.op = Op::write;
  return e;
}

ProgramEvent ProgramEvent::acquire(ThreadId t, LockId l) {
  ProgramEvent e;
  e.thread = std::move(t);
  e.op = Op::acquire;
  e.lock = std::move(l);
  return e;
}

ProgramEvent ProgramEvent::release(ThreadId t, LockId l) {
  ProgramEvent e = acquire(std::move(t), std::move(l));
  e.op = Op::release;
  return e;
}

ProgramEvent ProgramEvent::begin(ThreadId t) {
  ProgramEvent e;
  e.thread = std::move(t);
  e.op = Op::begin;
  return e;
}

ProgramEvent ProgramEvent::end(ThreadId t) {
  ProgramEvent e = begin(std::move(t));
  e.op = Op::end;
  return e;
}

ProgramEvent ProgramEvent::cas(ThreadId t, VariableId x, std::string old_value, std::string new_value) {
  ProgramEvent e = read(std::move(t), std::move(x));
  e.op = Op::cas;
  e.cas_old = std::move(old_value);
  e.cas_new = std::move(new_value);
  return e;
}

void ProgramEvent::check_fields() const {
  const std::string op_name(to_string(op));
  if (thread.empty()) throw InputError(op_name + " event without thread");
  auto forbid = [&](bool present, const char* field) {
    if (present) throw InputError(op_name + " event must not carry field '" + field + "'");
  };
  auto require = [&](bool present, const char* field) {
    if (!present) throw InputError(op_name + " event requires field '" + field + "'");
  };
  switch (op) {
    case Op::read:
    case Op::write:
      require(variable.has_value(), "var");
      forbid(lock.has_value(), "lock");
      forbid(cas_old.has_value(), "old");
      forbid(cas_new.has_value(), "new");
      break;
    case Op::cas:
      require(variable.has_value(), "var");
      require(cas_old.has_value(), "old");
      require(cas_new.has_value(), "new");
      forbid(lock.has_value(), "lock");
      break;
    case Op::acquire:
    case Op::release:
      require(lock.has_value(), "lock");
      forbid(variable.has_value(), "var");
      forbid(value.has_value(), "value");
      forbid(cas_old.has_value(), "old");
      forbid(cas_new.has_value(), "new");
      break;
    case Op::begin:
    case Op::end:
      forbid(variable.has_value(), "var");
      forbid(lock.has_value(), "lock");
      forbid(value.has_value(), "value");
      forbid(cas_old.has_value(), "old");
      forbid(cas_new.has_value(), "new");
      break;
  }
}

ActionId action_of(const ProgramEvent& e) {
  const std::string& t = e.thread.str();
  switch (e.op) {
    case Op::read: return ActionId("r(" + t + "," + e.variable->str() + ")");
    case Op::write: return ActionId("w(" + t + "," + e.variable->str() + ")");
    case Op::cas: return ActionId("cas(" + t + "," + e.variable->str() + ")");
    case Op::acquire: return ActionId("acq(" + t + "," + e.lock->str() + ")");
    case Op::release: return ActionId("rel(" + t + "," + e.lock->str() + ")");
    case Op::begin: return ActionId("beg(" + t + ")");
    case Op::end: return ActionId("en(" + t + ")");
  }
  throw InputError("unknown op");
}

ProgramExecution ProgramExecution::from_events(std::vector<ProgramEvent> events) {
  ProgramExecution exec;
  for (const auto& e : events) {
    e.check_fields();
    exec.threads.insert(e.thread);
    if (e.variable) exec.variables.insert(*e.variable);
    if (e.lock) exec.locks.insert(*e.lock);
  }
  exec.events = std::move(events);
  return exec;
}

const ProgramEvent& ProgramExecution::event(EventId e) const {
  if (e < 1 || e > events.size()) throw InputError("event id " + std::to_string(e) + " out of range");
  return events[e - 1];
}

Word ProgramExecution::word() const {
  Word w;
  w.reserve(events.size());
  for (const auto& e : events) w.push_back(action_of(e));
  return w;
}

std::string ProgramExecution::display_id(EventId e) const {
  const auto& ev = event(e);
  return ev.label ? *ev.label : std::to_string(e);
}

void check_well_formed(const ProgramExecution& exec) {
  std::map<ThreadId, bool> in_transaction;
  std::map<LockId, ThreadId> holder;
  for (std::size_t i = 0; i < exec.events.size(); ++i) {
    const auto& e = exec.events[i];
    const std::string where = "event " + std::to_string(i + 1) + ": ";
    try {
      e.check_fields();
    } catch (const InputError& err) {
      throw InputError(where + err.what());
    }
    if (!exec.threads.count(e.thread)) throw InputError(where + "undeclared thread " + e.thread.str());
    if (e.variable && !exec.variables.count(*e.variable))
      throw InputError(where + "undeclared variable " + e.variable->str());
    if (e.lock && !exec.locks.count(*e.lock)) throw InputError(where + "undeclared lock " + e.lock->str());

    switch (e.op) {
      case Op::begin:
        if (in_transaction[e.thread])
          throw InputError(where + "nested begin on thread " + e.thread.str());
        in_transaction[e.thread] = true;
        break;
      case Op::end:
        if (!in_transaction[e.thread])
          throw InputError(where + "end without begin on thread " + e.thread.str());
        in_transaction[e.thread] = false;
        break;
      case Op::acquire: {
        auto it = holder.find(*e.lock);
        if (it != holder.end())
          throw InputError(where + "lock " + e.lock->str() + " acquired while held by " + it->second.str());
        holder.emplace(*e.lock, e.thread);
        break;
      }
      case Op::release: {
        auto it = holder.find(*e.lock);
        if (it == holder.end() || it->second != e.thread)
          throw InputError(where + "release of lock " + e.lock->str() + " not held by " + e.thread.str());
        holder.erase(it);
        break;
      }
      default:
        break;
    }
  }
}

bool race_conflict(const ProgramEvent& a, const ProgramEvent& b) {
  if (a.thread == b.thread) return true;
  return a.is_lock_op() && b.is_lock_op() && a.lock == b.lock;
}

bool atomicity_conflict(const ProgramEvent& a, const ProgramEvent& b) {
  if (a.thread == b.thread) return true;
  return a.is_access() && b.is_access() && a.variable == b.variable &&
         (a.is_write_access() || b.is_write_access());
}

bool conflict(const ProgramEvent& a, const ProgramEvent& b, ConflictMode mode) {
  return mode == ConflictMode::race ? race_conflict(a, b) : atomicity_conflict(a, b);
}

ProcessId thread_process(const ThreadId& t) { return ProcessId(t.str()); }

ProcessId cache_process(const ThreadId& t, const VariableId& x) {
  return ProcessId("<" + t.str() + "," + x.str() + ">");
}

ProcessId lock_process(const LockId& l) { return ProcessId("lock(" + l.str() + ")"); }

DistributedAlphabet standard_alphabet(const ProgramExecution& exec, ConflictMode mode) {
  for (std::size_t i = 0; i < exec.events.size(); ++i) {
    const auto& e = exec.events[i];
    const std::string where = "event " + std::to_string(i + 1) + ": ";
    if (!exec.threads.count(e.thread)) throw InputError(where + "undeclared thread " + e.thread.str());
    if (e.variable && !exec.variables.count(*e.variable))
      throw InputError(where + "undeclared variable " + e.variable->str());
    if (e.lock && !exec.locks.count(*e.lock)) throw InputError(where + "undeclared lock " + e.lock->str());
  }

  std::set<ProcessId> processes;
  for (const auto& t : exec.threads) processes.insert(thread_process(t));

  // Threads touching each variable, for the cache processes <T,x>.
  std::map<VariableId, std::set<ThreadId>> users;
  if (mode == ConflictMode::atomicity) {
    for (const auto& e : exec.events)
      if (e.is_access()) users[*e.variable].insert(e.thread);
    for (const auto& [x, ts] : users)
      for (const auto& t : ts) processes.insert(cache_process(t, x));
  } else {
    for (const auto& l : exec.locks) processes.insert(lock_process(l));
  }

  std::map<ActionId, std::vector<ProcessId>> dom;
  for (const auto& e : exec.events) {
    ActionId a = action_of(e);
    if (dom.count(a)) continue;
    std::vector<ProcessId> d{thread_process(e.thread)};
    if (mode == ConflictMode::atomicity) {
      if (e.op == Op::read) {
        d.push_back(cache_process(e.thread, *e.variable));
      } else if (e.is_write_access()) {
        for (const auto& t : users[*e.variable]) d.push_back(cache_process(t, *e.variable));
      }
    } else if (e.is_lock_op()) {
      d.push_back(lock_process(*e.lock));
    }
    dom.emplace(std::move(a), std::move(d));
  }
  return DistributedAlphabet({processes.begin(), processes.end()}, dom);
}

TraceOrder program_trace(const ProgramExecution& exec, ConflictMode mode) {
  return trace_of_word(exec.word(), induced_dependence(standard_alphabet(exec, mode)));
}

}  // namespace tracekit
