#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tracekit/alphabet.hpp"

namespace tracekit {

struct TraceOptions {
  // Traces with at most this many events get a per-event reachability bitset;
  // longer traces answer reachability queries by search over the reduction.
  std::size_t closure_limit = 4096;
};

// Labelled partial order T(w): events are positions 1..n of w, the strict order is
// stored as its transitive reduction plus an optional closure index.
class TraceOrder {
public:
  TraceOrder() = default;

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const Word& labels() const { return labels_; }
  const ActionId& label(EventId e) const;

  // Transitive reduction of the strict order, sorted by (source, target).
  const std::vector<std::pair<EventId, EventId>>& edges() const { return edges_; }
  const std::vector<EventId>& immediate_predecessors(EventId e) const;

  // Reflexive order ⪯.
  bool happens_before(EventId i, EventId j) const;
  bool strictly_before(EventId i, EventId j) const;
  bool concurrent(EventId i, EventId j) const;

  bool has_closure_index() const { return !below_.empty() || labels_.empty(); }

private:
  friend TraceOrder trace_of_word(const Word&, const DependenceRelation&, const TraceOptions&);

  void check(EventId e) const;
  bool reaches(EventId from, EventId to) const;

  Word labels_;
  std::vector<std::vector<EventId>> preds_;
  std::vector<std::pair<EventId, EventId>> edges_;
  // below_[j-1] has bit i-1 set iff i ≺ j (strict).
  std::vector<boost::dynamic_bitset<>> below_;
};

TraceOrder trace_of_word(const Word& w, const DependenceRelation& dep,
                         const TraceOptions& options = {});

inline bool happens_before(const TraceOrder& t, EventId i, EventId j) { return t.happens_before(i, j); }
inline bool concurrent(const TraceOrder& t, EventId i, EventId j) { return t.concurrent(i, j); }

// Canonical step decomposition: an event's step is one more than the deepest step among
// its predecessors; each step lists its events by ascending action name.
struct FoataNormalForm {
  std::vector<std::vector<EventId>> steps;
  std::vector<std::vector<ActionId>> labels;

  std::string to_string() const;
  // Equality is on labels only, so normal forms of different words compare.
  friend bool operator==(const FoataNormalForm& a, const FoataNormalForm& b) {
    return a.labels == b.labels;
  }
};

FoataNormalForm foata_normal_form(const Word& w, const DependenceRelation& dep);
bool trace_equivalent(const Word& w1, const Word& w2, const DependenceRelation& dep);

struct LinearExtensions {
  std::vector<std::vector<EventId>> schedules;
  std::vector<Word> words;
  bool truncated = false;
};

// Enumerates linear extensions in lexicographic order of event ids, at most `limit`.
LinearExtensions linear_extensions(const TraceOrder& t, std::size_t limit);

// Calls `visit` on each linear extension in lexicographic order until it returns false.
// Returns true iff the enumeration ran to completion.
bool for_each_linear_extension(const TraceOrder& t,
                               const std::function<bool(const std::vector<EventId>&)>& visit);

std::string export_dot(const TraceOrder& t);

}  // namespace tracekit
