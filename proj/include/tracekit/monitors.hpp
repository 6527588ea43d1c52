#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tracekit/program.hpp"

namespace tracekit {

struct RaceReport {
  EventId first = 0;
  EventId second = 0;
  VariableId variable;
  Op first_op = Op::read;
  Op second_op = Op::read;

  friend bool operator==(const RaceReport&, const RaceReport&) = default;
};

// Same-variable accesses, at least one writing, unordered under the race-mode
// happens-before. Sorted by (first, second).
std::vector<RaceReport> detect_races(const ProgramExecution& exec);

struct AtomicityViolation {
  ThreadId thread;
  EventId begin = 0;
  std::optional<EventId> end;  // nullopt: transaction still open at the end of the log
  EventId interloper = 0;
  ThreadId interloper_thread;

  friend bool operator==(const AtomicityViolation&, const AtomicityViolation&) = default;
};

// Every event c of another thread with begin ≺ c ≺ end in the atomicity-mode
// happens-before (begin ≺ c for open transactions). Sorted by (begin, interloper).
std::vector<AtomicityViolation> detect_atomicity_violations(const ProgramExecution& exec);

enum class Serializability { serializable, violating, unknown };

std::string_view to_string(Serializability s);

struct SerializabilityVerdict {
  Serializability verdict = Serializability::unknown;
  std::size_t extensions_checked = 0;
  // A serial linear extension, when one was found.
  std::optional<std::vector<EventId>> witness;
};

// No transaction's begin..end block is interleaved with another thread's events.
// Events outside transactions count as one-event transactions; a transaction left open
// by the log runs to the end of the schedule.
bool is_serial_schedule(const ProgramExecution& exec, const std::vector<EventId>& schedule);

// Searches the linear extensions of the atomicity-mode trace for a serial one,
// looking at no more than `limit` extensions.
SerializabilityVerdict is_serializable(const ProgramExecution& exec, std::size_t limit);

}  // namespace tracekit
