#include "tracekit/trace.hpp"

#include <algorithm>
#include <sstream>

namespace tracekit {

const ActionId& TraceOrder::label(EventId e) const {
  check(e);
  return labels_[e - 1];
}

const std::vector<EventId>& TraceOrder::immediate_predecessors(EventId e) const {
  check(e);
  return preds_[e - 1];
}

void TraceOrder::check(EventId e) const {
  if (e < 1 || e > labels_.size())
    throw InputError("event id " + std::to_string(e) + " out of range 1.." +
                     std::to_string(labels_.size()));
}

bool TraceOrder::reaches(EventId from, EventId to) const {
  if (from >= to) return false;
  if (!below_.empty()) return below_[to - 1].test(from - 1);
  // Backward search over the reduction; nothing below `from` can lead back up to it.
  std::vector<char> seen(to, 0);
  std::vector<EventId> stack{to};
  while (!stack.empty()) {
    EventId e = stack.back();
    stack.pop_back();
    for (EventId p : preds_[e - 1]) {
      if (p == from) return true;
      if (p > from && !seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  return false;
}

bool TraceOrder::happens_before(EventId i, EventId j) const {
  check(i);
  check(j);
  return i == j || reaches(i, j);
}

bool TraceOrder::strictly_before(EventId i, EventId j) const {
  check(i);
  check(j);
  return reaches(i, j);
}

bool TraceOrder::concurrent(EventId i, EventId j) const {
  check(i);
  check(j);
  return i != j && !reaches(i, j) && !reaches(j, i);
}

TraceOrder trace_of_word(const Word& w, const DependenceRelation& dep, const TraceOptions& options) {
  const auto letters = dep.resolve(w);
  const std::size_t n = w.size();
  const std::size_t sigma = dep.size();

  TraceOrder t;
  t.labels_ = w;
  t.preds_.resize(n);
  const bool indexed = n <= options.closure_limit;
  if (indexed) t.below_.assign(n, boost::dynamic_bitset<>(n));

  // last[a] = most recent position carrying action a; every earlier occurrence of a
  // precedes it, so the candidates for immediate predecessors are these positions only.
  std::vector<EventId> last(sigma, 0);
  std::vector<EventId> candidates;
  for (EventId j = 1; j <= n; ++j) {
    const std::size_t a = letters[j - 1];
    candidates.clear();
    for (std::size_t b = 0; b < sigma; ++b)
      if (last[b] != 0 && dep.depends(b, a)) candidates.push_back(last[b]);
    std::sort(candidates.begin(), candidates.end(), std::greater<>());

    auto& preds = t.preds_[j - 1];
    if (indexed) {
      auto& below = t.below_[j - 1];
      for (EventId c : candidates) {
        if (!below.test(c - 1)) preds.push_back(c);
        below |= t.below_[c - 1];
        below.set(c - 1);
      }
    } else {
      for (EventId c : candidates) {
        bool covered = std::any_of(preds.begin(), preds.end(),
                                   [&](EventId kept) { return t.reaches(c, kept); });
        if (!covered) preds.push_back(c);
      }
    }
    std::sort(preds.begin(), preds.end());
    last[a] = j;
  }

  for (EventId j = 1; j <= n; ++j)
    for (EventId i : t.preds_[j - 1]) t.edges_.emplace_back(i, j);
  std::sort(t.edges_.begin(), t.edges_.end());
  return t;
}

std::string FoataNormalForm::to_string() const {
  std::string out;
  for (const auto& step : labels) {
    out += '[';
    for (std::size_t i = 0; i < step.size(); ++i) {
      if (i) out += ' ';
      out += step[i].str();
    }
    out += ']';
  }
  return out;
}

FoataNormalForm foata_normal_form(const Word& w, const DependenceRelation& dep) {
  const auto letters = dep.resolve(w);
  std::vector<std::size_t> level(w.size(), 0);
  // deepest[b] = step of the last occurrence of b so far (0 = none).
  std::vector<std::size_t> deepest(dep.size(), 0);
  std::size_t height = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::size_t lvl = 0;
    for (std::size_t b = 0; b < dep.size(); ++b)
      if (dep.depends(b, letters[i])) lvl = std::max(lvl, deepest[b]);
    level[i] = lvl + 1;
    deepest[letters[i]] = level[i];
    height = std::max(height, level[i]);
  }

  FoataNormalForm nf;
  nf.steps.resize(height);
  for (std::size_t i = 0; i < w.size(); ++i) nf.steps[level[i] - 1].push_back(i + 1);
  for (auto& step : nf.steps) {
    // Letters within a step are pairwise independent, hence distinct.
    std::sort(step.begin(), step.end(), [&](EventId x, EventId y) { return w[x - 1] < w[y - 1]; });
    auto& row = nf.labels.emplace_back();
    for (EventId e : step) row.push_back(w[e - 1]);
  }
  return nf;
}

bool trace_equivalent(const Word& w1, const Word& w2, const DependenceRelation& dep) {
  return foata_normal_form(w1, dep) == foata_normal_form(w2, dep);
}

bool for_each_linear_extension(const TraceOrder& t,
                               const std::function<bool(const std::vector<EventId>&)>& visit) {
  const std::size_t n = t.size();
  std::vector<std::vector<EventId>> succs(n + 1);
  std::vector<std::size_t> pending(n + 1, 0);
  for (const auto& [i, j] : t.edges()) {
    succs[i].push_back(j);
    ++pending[j];
  }
  std::vector<char> used(n + 1, 0);
  std::vector<EventId> schedule;
  schedule.reserve(n);

  // Returns false once the visitor asks to stop.
  std::function<bool()> extend = [&]() -> bool {
    if (schedule.size() == n) return visit(schedule);
    for (EventId e = 1; e <= n; ++e) {
      if (used[e] || pending[e] != 0) continue;
      used[e] = 1;
      schedule.push_back(e);
      for (EventId s : succs[e]) --pending[s];
      bool go_on = extend();
      for (EventId s : succs[e]) ++pending[s];
      schedule.pop_back();
      used[e] = 0;
      if (!go_on) return false;
    }
    return true;
  };
  return extend();
}

LinearExtensions linear_extensions(const TraceOrder& t, std::size_t limit) {
  if (limit == 0) throw InputError("linear extension limit must be at least 1");
  LinearExtensions out;
  for_each_linear_extension(t, [&](const std::vector<EventId>& schedule) {
    if (out.schedules.size() == limit) {
      out.truncated = true;
      return false;
    }
    out.schedules.push_back(schedule);
    Word& word = out.words.emplace_back();
    for (EventId e : schedule) word.push_back(t.label(e));
    return true;
  });
  return out;
}

namespace {
std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}
}  // namespace

std::string export_dot(const TraceOrder& t) {
  std::ostringstream os;
  os << "digraph trace {\n";
  for (EventId e = 1; e <= t.size(); ++e)
    os << "  e" << e << " [label=\"" << e << ':' << dot_escape(t.label(e).str()) << "\"];\n";
  for (const auto& [i, j] : t.edges()) os << "  e" << i << " -> e" << j << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace tracekit
