#pragma once

// Hand-transcribed example executions; labels carry the program line numbers.

#include "tracekit/gossip.hpp"
#include "tracekit/program.hpp"

namespace scenarios {

using namespace tracekit;

// Two threads inserting into a shared list: execution 1,2,3,7,8,9.
inline ProgramExecution list_insert() {
  const ThreadId t1("T1"), t2("T2");
  std::vector<ProgramEvent> ev{
      ProgramEvent::write(t1, VariableId("t1")).tagged("1"),
      ProgramEvent::write(t1, VariableId("t1.data")).tagged("2"),
      ProgramEvent::read(t1, VariableId("head")).tagged("3"),
      ProgramEvent::read(t2, VariableId("head")).tagged("7"),
      ProgramEvent::acquire(t2, LockId("lock")).tagged("8"),
      ProgramEvent::write(t2, VariableId("head")).tagged("9"),
  };
  return ProgramExecution::from_events(std::move(ev));
}

// Lines of the two transactions: T1 = 1 beg, 2 r x, 3 w x, 4 en; T2 = 5 beg, 6 w x, 7 en.
inline ProgramEvent transaction_line(int line) {
  const ThreadId t1("T1"), t2("T2");
  const VariableId x("x");
  switch (line) {
    case 1: return ProgramEvent::begin(t1).tagged("1");
    case 2: return ProgramEvent::read(t1, x).tagged("2");
    case 3: return ProgramEvent::write(t1, x).tagged("3");
    case 4: return ProgramEvent::end(t1).tagged("4");
    case 5: return ProgramEvent::begin(t2).tagged("5");
    case 6: return ProgramEvent::write(t2, x).tagged("6");
    default: return ProgramEvent::end(t2).tagged("7");
  }
}

inline ProgramExecution transactions(const std::vector<int>& lines) {
  std::vector<ProgramEvent> ev;
  for (int l : lines) ev.push_back(transaction_line(l));
  return ProgramExecution::from_events(std::move(ev));
}

// Non-serializable interleaving 1,2,5,6,7,3,4.
inline ProgramExecution interleaved() { return transactions({1, 2, 5, 6, 7, 3, 4}); }
inline ProgramExecution serial() { return transactions({1, 2, 3, 4, 5, 6, 7}); }

// Line tree T1 - <T1,x> - <T2,x> - T2, rooted at T1.
inline ProcessTree line_tree() {
  return ProcessTree::from_edges(ProcessId("T1"), {{ProcessId("T1"), ProcessId("<T1,x>")},
                                                   {ProcessId("<T1,x>"), ProcessId("<T2,x>")},
                                                   {ProcessId("<T2,x>"), ProcessId("T2")}});
}

}  // namespace scenarios
