#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tracekit/alphabet.hpp"
#include "tracekit/trace.hpp"

namespace tracekit {

enum class Op { read, write, acquire, release, begin, end, cas };

std::string_view to_string(Op op);
std::optional<Op> parse_op(std::string_view text);

struct ProgramEvent {
  ThreadId thread;
  Op op = Op::read;
  std::optional<VariableId> variable;   // read, write, cas
  std::optional<LockId> lock;           // acquire, release
  std::optional<std::string> cas_old;   // cas
  std::optional<std::string> cas_new;   // cas
  std::optional<std::string> value;     // read, write, cas
  // Free-form source tag (e.g. a program line number) echoed in reports.
  std::optional<std::string> label;

  static ProgramEvent read(ThreadId t, VariableId x);
  static ProgramEvent write(ThreadId t, VariableId x);
  static ProgramEvent acquire(ThreadId t, LockId l);
  static ProgramEvent release(ThreadId t, LockId l);
  static ProgramEvent begin(ThreadId t);
  static ProgramEvent end(ThreadId t);
  static ProgramEvent cas(ThreadId t, VariableId x, std::string old_value, std::string new_value);

  ProgramEvent& tagged(std::string tag) {
    label = std::move(tag);
    return *this;
  }

  bool is_access() const { return op == Op::read || op == Op::write || op == Op::cas; }
  bool is_write_access() const { return op == Op::write || op == Op::cas; }
  bool is_lock_op() const { return op == Op::acquire || op == Op::release; }

  // Throws InputError if the optional fields do not match `op`.
  void check_fields() const;

  friend bool operator==(const ProgramEvent&, const ProgramEvent&) = default;
};

// Action label of an event: values are not part of it.
// r(T,x), w(T,x), cas(T,x), acq(T,L), rel(T,L), beg(T), en(T).
ActionId action_of(const ProgramEvent& e);

struct ProgramExecution {
  std::vector<ProgramEvent> events;
  std::set<ThreadId> threads;
  std::set<VariableId> variables;
  std::set<LockId> locks;

  // Declares exactly the threads, variables and locks the events mention.
  static ProgramExecution from_events(std::vector<ProgramEvent> events);

  std::size_t size() const { return events.size(); }
  const ProgramEvent& event(EventId e) const;
  Word word() const;
  // label if present, otherwise the event id.
  std::string display_id(EventId e) const;
};

// Per-thread begin/end alternate without nesting, each lock is released only by its
// holder, and every event mentions only declared names. Throws InputError naming the
// offending 1-based position.
void check_well_formed(const ProgramExecution& exec);

enum class ConflictMode { race, atomicity };

std::string_view to_string(ConflictMode mode);

// Same thread, or both acquire/release the same lock.
bool race_conflict(const ProgramEvent& a, const ProgramEvent& b);
// Same thread, or both access the same variable and at least one writes (cas writes).
bool atomicity_conflict(const ProgramEvent& a, const ProgramEvent& b);
bool conflict(const ProgramEvent& a, const ProgramEvent& b, ConflictMode mode);

ProcessId thread_process(const ThreadId& t);
ProcessId cache_process(const ThreadId& t, const VariableId& x);
ProcessId lock_process(const LockId& l);

// Distributed alphabet over the execution's action labels whose induced dependence is
// the mode's conflict relation.
DistributedAlphabet standard_alphabet(const ProgramExecution& exec, ConflictMode mode);

// Happens-before of the execution under the mode's conflict relation.
TraceOrder program_trace(const ProgramExecution& exec, ConflictMode mode);

}  // namespace tracekit
