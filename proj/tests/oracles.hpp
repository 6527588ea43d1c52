#pragma once

// Reference implementations used only by the tests. They work from definitions
// (brute-force closures, swap reachability, conflict graphs) and share no code with
// the library algorithms they check.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tracekit/dfa.hpp"
#include "tracekit/gossip.hpp"
#include "tracekit/program.hpp"

namespace oracle {

using namespace tracekit;

inline std::uint64_t seed_from_env(std::uint64_t fallback = 20240917) {
  if (const char* s = std::getenv("TRACEKIT_SEED")) return std::strtoull(s, nullptr, 10);
  return fallback;
}

// before[i][j] (0-based, i<j): position i precedes j in the reflexive-transitive closure
// of {(i,j) | i<j, dep(w_i, w_j)}, computed by plain O(n^3) propagation.
inline std::vector<std::vector<char>> strict_order(std::size_t n, const std::function<bool(std::size_t, std::size_t)>& dep) {
  std::vector<std::vector<char>> before(n, std::vector<char>(n, 0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      if (dep(i, j)) before[i][j] = 1;
      if (!before[i][j])
        for (std::size_t k = i + 1; k < j; ++k)
          if (before[i][k] && dep(k, j)) {
            before[i][j] = 1;
            break;
          }
    }
  return before;
}

inline std::vector<std::vector<char>> word_order(const Word& w, const DependenceRelation& d) {
  return strict_order(w.size(), [&](std::size_t i, std::size_t j) { return d.depends(w[i], w[j]); });
}

// All words reachable from w by swapping adjacent independent letters.
inline std::set<Word> swap_class(const Word& w, const DependenceRelation& d) {
  std::set<Word> seen{w};
  std::deque<Word> queue{w};
  while (!queue.empty()) {
    Word cur = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (d.depends(cur[i], cur[i + 1])) continue;
      Word nxt = cur;
      std::swap(nxt[i], nxt[i + 1]);
      if (seen.insert(nxt).second) queue.push_back(nxt);
    }
  }
  return seen;
}

// A random reflexive symmetric relation over the given actions.
inline DependenceRelation random_dependence(const std::vector<ActionId>& actions, std::mt19937_64& rng, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<ActionId, ActionId>> pairs;
  for (std::size_t i = 0; i < actions.size(); ++i)
    for (std::size_t j = i + 1; j < actions.size(); ++j)
      if (coin(rng)) pairs.emplace_back(actions[i], actions[j]);
  return DependenceRelation::from_pairs(actions, pairs);
}

inline std::vector<ActionId> letters(std::size_t k) {
  std::vector<ActionId> out;
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

inline Word random_word(const std::vector<ActionId>& sigma, std::size_t len, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, sigma.size() - 1);
  Word w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(sigma[pick(rng)]);
  return w;
}

// Races by definition: same variable, one write, unordered under race-mode conflicts.
inline std::vector<std::pair<EventId, EventId>> races(const ProgramExecution& exec) {
  const auto& ev = exec.events;
  auto dep = [&](std::size_t i, std::size_t j) {
    if (ev[i].thread == ev[j].thread) return true;
    return ev[i].is_lock_op() && ev[j].is_lock_op() && ev[i].lock == ev[j].lock;
  };
  auto before = strict_order(ev.size(), dep);
  std::vector<std::pair<EventId, EventId>> out;
  for (std::size_t i = 0; i < ev.size(); ++i)
    for (std::size_t j = i + 1; j < ev.size(); ++j)
      if (ev[i].is_access() && ev[j].is_access() && ev[i].variable == ev[j].variable &&
          (ev[i].is_write_access() || ev[j].is_write_access()) && !before[i][j])
        out.emplace_back(i + 1, j + 1);
  return out;
}

inline bool atomicity_dep(const ProgramEvent& a, const ProgramEvent& b) {
  if (a.thread == b.thread) return true;
  return a.is_access() && b.is_access() && a.variable == b.variable && (a.is_write_access() || b.is_write_access());
}

// (begin, interloper, end or 0 for open) triples by definition.
inline std::vector<std::tuple<EventId, EventId, EventId>> atomicity(const ProgramExecution& exec) {
  const auto& ev = exec.events;
  auto before = strict_order(ev.size(), [&](std::size_t i, std::size_t j) { return atomicity_dep(ev[i], ev[j]); });
  std::vector<std::tuple<EventId, EventId, EventId>> out;
  for (std::size_t b = 0; b < ev.size(); ++b) {
    if (ev[b].op != Op::begin) continue;
    std::size_t e = ev.size();
    for (std::size_t k = b + 1; k < ev.size(); ++k)
      if (ev[k].thread == ev[b].thread && ev[k].op == Op::end) {
        e = k;
        break;
      }
    for (std::size_t c = b + 1; c < ev.size(); ++c) {
      if (ev[c].thread == ev[b].thread) continue;
      if (e < ev.size() && c >= e) break;
      if (before[b][c] && (e == ev.size() || before[c][e])) out.emplace_back(b + 1, c + 1, e == ev.size() ? 0 : e + 1);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Conflict-serializability via acyclicity of the conflict graph between transactions
// (events outside begin/end each form their own unit).
inline bool serializable(const ProgramExecution& exec) {
  const auto& ev = exec.events;
  std::vector<std::size_t> unit(ev.size());
  std::map<ThreadId, std::size_t> open;
  std::size_t units = 0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    auto it = open.find(ev[i].thread);
    if (it != open.end()) {
      unit[i] = it->second;
      if (ev[i].op == Op::end) open.erase(it);
    } else {
      unit[i] = units++;
      if (ev[i].op == Op::begin) open[ev[i].thread] = unit[i];
    }
  }
  std::vector<std::set<std::size_t>> succ(units);
  for (std::size_t i = 0; i < ev.size(); ++i)
    for (std::size_t j = i + 1; j < ev.size(); ++j)
      if (unit[i] != unit[j] && atomicity_dep(ev[i], ev[j])) succ[unit[i]].insert(unit[j]);
  // Kahn's algorithm.
  // An open transaction runs to the end: it must come last, so at most one may be open
  // and it may not conflict with anything logged after it.
  if (open.size() > 1) return false;
  for (const auto& [t, u] : open)
    if (!succ[u].empty()) return false;
  std::vector<std::size_t> indeg(units, 0);
  for (const auto& s : succ)
    for (auto v : s) ++indeg[v];
  std::vector<std::size_t> ready;
  for (std::size_t u = 0; u < units; ++u)
    if (!indeg[u]) ready.push_back(u);
  std::size_t done = 0;
  while (!ready.empty()) {
    auto u = ready.back();
    ready.pop_back();
    ++done;
    for (auto v : succ[u])
      if (--indeg[v] == 0) ready.push_back(v);
  }
  return done == units;
}

// Random well-formed execution with begin/end blocks, locks respected.
inline ProgramExecution random_execution(std::mt19937_64& rng, std::size_t threads, std::size_t max_events,
                                         bool transactional, bool with_locks) {
  std::vector<ThreadId> ts;
  for (std::size_t i = 0; i < threads; ++i) ts.emplace_back("T" + std::to_string(i + 1));
  const std::vector<VariableId> vars{VariableId("x"), VariableId("y")};
  const LockId lk("l");
  std::uniform_int_distribution<std::size_t> pick_thread(0, threads - 1);
  std::uniform_int_distribution<int> pick_op(0, 9);
  std::uniform_int_distribution<std::size_t> pick_var(0, vars.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_len(1, max_events);
  const std::size_t n = pick_len(rng);
  std::vector<ProgramEvent> events;
  std::map<ThreadId, bool> in_tx;
  std::optional<ThreadId> holder;
  while (events.size() < n) {
    const ThreadId& t = ts[pick_thread(rng)];
    int op = pick_op(rng);
    if (transactional && op <= 2) {
      events.push_back(in_tx[t] ? ProgramEvent::end(t) : ProgramEvent::begin(t));
      in_tx[t] = !in_tx[t];
    } else if (with_locks && op == 3) {
      if (!holder) {
        events.push_back(ProgramEvent::acquire(t, lk));
        holder = t;
      } else if (*holder == t) {
        events.push_back(ProgramEvent::release(t, lk));
        holder.reset();
      }
    } else if (op <= 6) {
      events.push_back(ProgramEvent::read(t, vars[pick_var(rng)]));
    } else {
      events.push_back(ProgramEvent::write(t, vars[pick_var(rng)]));
    }
  }
  return ProgramExecution::from_events(std::move(events));
}

// Gossip ground truth: p's view is the causal past of its last event.
inline KnowledgeDag knowledge(const Word& w, const DistributedAlphabet& alpha, const std::set<ActionId>& gamma,
                              const ProcessId& p, std::size_t upto) {
  auto dom = [&](std::size_t i) {
    auto d = alpha.domain(w[i]);
    return std::set<ProcessId>(d.begin(), d.end());
  };
  auto dep = [&](std::size_t i, std::size_t j) {
    auto a = dom(i), b = dom(j);
    return std::any_of(a.begin(), a.end(), [&](const ProcessId& q) { return b.count(q) > 0; });
  };
  auto before = strict_order(upto, dep);
  std::size_t view = upto;
  for (std::size_t i = upto; i-- > 0;)
    if (dom(i).count(p)) {
      view = i;
      break;
    }
  if (view == upto) return {};
  std::map<ActionId, std::size_t> latest;
  for (std::size_t i = 0; i <= view; ++i)
    if (gamma.count(w[i]) && (i == view || before[i][view])) latest[w[i]] = i;
  std::vector<KnowledgeNode> nodes;
  for (const auto& [a, i] : latest) nodes.push_back({a, i + 1});
  std::vector<std::pair<EventId, EventId>> order;
  for (const auto& [a, i] : latest)
    for (const auto& [b, j] : latest)
      if (i < j && before[i][j]) order.emplace_back(i + 1, j + 1);
  return KnowledgeDag(std::move(nodes), std::move(order));
}

// Accepting-state equivalence classes by table filling over the completed reachable part.
inline std::size_t myhill_nerode_classes(const Dfa& d) {
  const std::size_t k = d.num_letters();
  std::vector<Dfa::State> reach{d.initial()};
  std::set<Dfa::State> seen{d.initial()};
  for (std::size_t h = 0; h < reach.size(); ++h)
    for (std::size_t a = 0; a < k; ++a) {
      auto t = d.next(reach[h], a);
      if (t != Dfa::kNone && seen.insert(t).second) reach.push_back(t);
    }
  const std::size_t n = reach.size() + 1;  // last = sink
  std::map<Dfa::State, std::size_t> idx;
  for (std::size_t i = 0; i < reach.size(); ++i) idx[reach[i]] = i;
  auto next = [&](std::size_t s, std::size_t a) {
    if (s == n - 1) return n - 1;
    auto t = d.next(reach[s], a);
    return t == Dfa::kNone ? n - 1 : idx[t];
  };
  auto acc = [&](std::size_t s) { return s != n - 1 && d.accepting(reach[s]); };
  std::vector<std::vector<char>> mark(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mark[i][j] = acc(i) != acc(j);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!mark[i][j])
          for (std::size_t a = 0; a < k; ++a)
            if (mark[next(i, a)][next(j, a)]) {
              mark[i][j] = 1;
              changed = true;
              break;
            }
  }
  // Count classes, then drop the dead class (the sink's) if it is not the initial one.
  std::vector<char> assigned(n, 0);
  std::size_t classes = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    ++classes;
    for (std::size_t j = i; j < n; ++j)
      if (!mark[i][j]) assigned[j] = 1;
  }
  const bool empty_language = !mark[0][n - 1];
  return empty_language ? 1 : classes - 1;
}

// Acceptance of every word up to max_len, indexed in shortlex order over the letters.
struct WordTable {
  std::size_t k = 0;
  std::vector<std::size_t> offset;  // offset[len] = index of the first word of that length
  std::vector<Word> words;

  WordTable(const std::vector<ActionId>& sigma, std::size_t max_len) : k(sigma.size()) {
    words.push_back({});
    offset.push_back(0);
    std::size_t start = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
      const std::size_t end = words.size();
      offset.push_back(end);
      for (std::size_t i = start; i < end; ++i)
        for (const auto& a : sigma) {
          Word w = words[i];
          w.push_back(a);
          words.push_back(std::move(w));
        }
      start = end;
    }
  }
};

}  // namespace oracle
