#include "tracekit/monitors.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace tracekit {

std::vector<RaceReport> detect_races(const ProgramExecution& exec) {
  check_well_formed(exec);
  const TraceOrder t = program_trace(exec, ConflictMode::race);
  std::vector<RaceReport> out;
  for (EventId i = 1; i <= exec.size(); ++i) {
    const auto& a = exec.event(i);
    if (!a.is_access()) continue;
    for (EventId j = i + 1; j <= exec.size(); ++j) {
      const auto& b = exec.event(j);
      if (!b.is_access() || b.variable != a.variable) continue;
      if (!a.is_write_access() && !b.is_write_access()) continue;
      if (t.concurrent(i, j)) out.push_back({i, j, *a.variable, a.op, b.op});
    }
  }
  return out;
}

std::vector<AtomicityViolation> detect_atomicity_violations(const ProgramExecution& exec) {
  check_well_formed(exec);
  const TraceOrder t = program_trace(exec, ConflictMode::atomicity);

  std::vector<AtomicityViolation> out;
  std::map<ThreadId, EventId> open;
  auto scan = [&](const ThreadId& thread, EventId begin, std::optional<EventId> end) {
    for (EventId c = begin + 1; c <= exec.size(); ++c) {
      if (end && c >= *end) break;
      const auto& ev = exec.event(c);
      if (ev.thread == thread) continue;
      if (t.strictly_before(begin, c) && (!end || t.strictly_before(c, *end)))
        out.push_back({thread, begin, end, c, ev.thread});
    }
  };
  for (EventId i = 1; i <= exec.size(); ++i) {
    const auto& ev = exec.event(i);
    if (ev.op == Op::begin) {
      open[ev.thread] = i;
    } else if (ev.op == Op::end) {
      scan(ev.thread, open.at(ev.thread), i);
      open.erase(ev.thread);
    }
  }
  for (const auto& [thread, begin] : open) scan(thread, begin, std::nullopt);

  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return std::tie(x.begin, x.interloper) < std::tie(y.begin, y.interloper);
  });
  return out;
}

std::string_view to_string(Serializability s) {
  switch (s) {
    case Serializability::serializable: return "serializable";
    case Serializability::violating: return "violating";
    case Serializability::unknown: return "unknown";
  }
  return "?";
}

bool is_serial_schedule(const ProgramExecution& exec, const std::vector<EventId>& schedule) {
  // Unit of each event: its transaction, or itself outside begin/end. A transaction still
  // open at the end of the log never closes, so nothing of another unit may follow it.
  std::vector<std::size_t> unit(exec.size() + 1, 0), remaining;
  std::map<ThreadId, std::size_t> open;
  for (EventId i = 1; i <= exec.size(); ++i) {
    const auto& ev = exec.event(i);
    auto it = open.find(ev.thread);
    if (it != open.end()) {
      unit[i] = it->second;
      if (ev.op == Op::end) open.erase(it);
    } else {
      unit[i] = remaining.size();
      remaining.push_back(0);
      if (ev.op == Op::begin) open[ev.thread] = unit[i];
    }
    ++remaining[unit[i]];
  }
  for (const auto& [thread, u] : open) remaining[u] = std::numeric_limits<std::size_t>::max();
  std::optional<std::size_t> current;
  for (EventId e : schedule) {
    if (current && *current != unit[e]) return false;
    current = --remaining[unit[e]] ? std::optional<std::size_t>(unit[e]) : std::nullopt;
  }
  return true;
}

SerializabilityVerdict is_serializable(const ProgramExecution& exec, std::size_t limit) {
  check_well_formed(exec);
  if (limit == 0) throw InputError("serializability limit must be at least 1");
  const TraceOrder t = program_trace(exec, ConflictMode::atomicity);

  SerializabilityVerdict v;
  bool truncated = false;
  for_each_linear_extension(t, [&](const std::vector<EventId>& schedule) {
    if (v.extensions_checked == limit) {
      truncated = true;
      return false;
    }
    ++v.extensions_checked;
    if (is_serial_schedule(exec, schedule)) {
      v.witness = schedule;
      return false;
    }
    return true;
  });
  if (v.witness)
    v.verdict = Serializability::serializable;
  else
    v.verdict = truncated ? Serializability::unknown : Serializability::violating;
  return v;
}

}  // namespace tracekit
