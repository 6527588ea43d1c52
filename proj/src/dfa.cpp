#include "tracekit/dfa.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace tracekit {

Dfa::Dfa(std::vector<ActionId> alphabet, std::size_t num_states, State initial)
    : initial_(initial) {
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  alphabet_ = std::move(alphabet);
  for (std::size_t i = 0; i < alphabet_.size(); ++i) letter_index_.emplace(alphabet_[i], i);
  if (num_states == 0) throw InputError("a DFA needs at least one state");
  if (initial >= num_states) throw InputError("initial state out of range");
  accepting_.assign(num_states, 0);
  delta_.assign(num_states * alphabet_.size(), kNone);
  names_.resize(num_states);
  for (std::size_t s = 0; s < num_states; ++s) names_[s] = "q" + std::to_string(s);
}

std::optional<std::size_t> Dfa::letter_index(const ActionId& a) const {
  auto it = letter_index_.find(a);
  if (it == letter_index_.end()) return std::nullopt;
  return it->second;
}

Dfa::State Dfa::next(State s, const ActionId& a) const {
  auto i = letter_index(a);
  if (!i) throw InputError("letter " + a.str() + " not in DFA alphabet");
  return next(s, *i);
}

void Dfa::check_state(State s) const {
  if (s >= num_states()) throw InputError("DFA state " + std::to_string(s) + " out of range");
}

void Dfa::set_accepting(State s, bool accept) {
  check_state(s);
  accepting_[s] = accept ? 1 : 0;
}

void Dfa::set_transition(State from, const ActionId& a, State to) {
  auto i = letter_index(a);
  if (!i) throw InputError("letter " + a.str() + " not in DFA alphabet");
  set_transition(from, *i, to);
}

void Dfa::set_transition(State from, std::size_t letter, State to) {
  check_state(from);
  if (to != kNone) check_state(to);
  delta_[from * alphabet_.size() + letter] = to;
}

Dfa::State Dfa::walk(State from, const Word& w) const {
  State s = from;
  for (std::size_t pos = 0; pos < w.size(); ++pos) {
    auto i = letter_index(w[pos]);
    if (!i)
      throw InputError("unknown letter '" + w[pos].str() + "' at position " + std::to_string(pos + 1));
    if (s != kNone) s = next(s, *i);
  }
  return s;
}

bool run_dfa(const Dfa& d, const Word& w) {
  Dfa::State s = d.walk(d.initial(), w);
  return s != Dfa::kNone && d.accepting(s);
}

Dfa minimize(const Dfa& d) {
  using State = Dfa::State;
  const std::size_t k = d.num_letters();

  // Reachable part, completed with one extra sink state.
  std::vector<State> order;
  std::vector<State> local(d.num_states(), Dfa::kNone);
  local[d.initial()] = 0;
  order.push_back(d.initial());
  for (std::size_t head = 0; head < order.size(); ++head)
    for (std::size_t a = 0; a < k; ++a) {
      State t = d.next(order[head], a);
      if (t != Dfa::kNone && local[t] == Dfa::kNone) {
        local[t] = static_cast<State>(order.size());
        order.push_back(t);
      }
    }
  const std::size_t m = order.size();
  const State sink = static_cast<State>(m);
  std::vector<State> delta((m + 1) * k, sink);
  std::vector<char> accept(m + 1, 0);
  for (std::size_t s = 0; s < m; ++s) {
    accept[s] = d.accepting(order[s]);
    for (std::size_t a = 0; a < k; ++a) {
      State t = d.next(order[s], a);
      if (t != Dfa::kNone) delta[s * k + a] = local[t];
    }
  }

  // Moore refinement: split blocks by (block, successor blocks) until stable.
  std::vector<std::size_t> block(m + 1);
  for (std::size_t s = 0; s <= m; ++s) block[s] = accept[s] ? 1 : 0;
  std::size_t num_blocks = 0;
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> refined(m + 1);
    for (std::size_t s = 0; s <= m; ++s) {
      std::vector<std::size_t> sig;
      sig.reserve(k + 1);
      sig.push_back(block[s]);
      for (std::size_t a = 0; a < k; ++a) sig.push_back(block[delta[s * k + a]]);
      refined[s] = ids.emplace(std::move(sig), ids.size()).first->second;
    }
    bool stable = ids.size() == num_blocks;
    num_blocks = ids.size();
    block = std::move(refined);
    if (stable) break;
  }

  // The sink's block is exactly the set of dead states; drop it unless it is initial.
  const std::size_t dead = block[sink];
  const bool empty_language = block[0] == dead;

  // Canonical BFS numbering of the quotient.
  std::vector<std::size_t> rep(num_blocks, m + 1);
  for (std::size_t s = 0; s <= m; ++s)
    if (rep[block[s]] == m + 1) rep[block[s]] = s;
  std::vector<State> number(num_blocks, Dfa::kNone);
  std::vector<std::size_t> queue{block[0]};
  number[block[0]] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    if (empty_language) break;
    std::size_t b = queue[head];
    for (std::size_t a = 0; a < k; ++a) {
      std::size_t t = block[delta[rep[b] * k + a]];
      if (t == dead || number[t] != Dfa::kNone) continue;
      number[t] = static_cast<State>(queue.size());
      queue.push_back(t);
    }
  }

  Dfa out(d.alphabet(), queue.size(), 0);
  for (std::size_t q = 0; q < queue.size(); ++q) {
    std::size_t b = queue[q];
    out.set_accepting(static_cast<State>(q), accept[rep[b]] != 0);
    out.set_state_name(static_cast<State>(q), d.state_name(order[rep[b]]));
    if (empty_language) continue;
    for (std::size_t a = 0; a < k; ++a) {
      std::size_t t = block[delta[rep[b] * k + a]];
      if (t != dead) out.set_transition(static_cast<State>(q), a, number[t]);
    }
  }
  return out;
}

namespace {

// Breadth-first renumbering of the reachable part, ignoring state names.
std::vector<std::uint64_t> canonical_table(const Dfa& d) {
  std::vector<Dfa::State> number(d.num_states(), Dfa::kNone);
  std::vector<Dfa::State> queue{d.initial()};
  number[d.initial()] = 0;
  std::vector<std::uint64_t> table;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Dfa::State s = queue[head];
    table.push_back(d.accepting(s) ? 1 : 0);
    for (std::size_t a = 0; a < d.num_letters(); ++a) {
      Dfa::State t = d.next(s, a);
      if (t == Dfa::kNone) {
        table.push_back(Dfa::kNone);
        continue;
      }
      if (number[t] == Dfa::kNone) {
        number[t] = static_cast<Dfa::State>(queue.size());
        queue.push_back(t);
      }
      table.push_back(number[t]);
    }
  }
  return table;
}

}  // namespace

bool isomorphic(const Dfa& a, const Dfa& b) {
  return a.alphabet() == b.alphabet() && canonical_table(a) == canonical_table(b);
}

Word ClosureWitness::first_order() const {
  Word w = prefix;
  w.push_back(first);
  w.push_back(second);
  w.insert(w.end(), suffix.begin(), suffix.end());
  return w;
}

Word ClosureWitness::second_order() const {
  Word w = prefix;
  w.push_back(second);
  w.push_back(first);
  w.insert(w.end(), suffix.begin(), suffix.end());
  return w;
}

std::string ClosureWitness::to_string() const {
  return "u=[" + tracekit::to_string(prefix) + "] a=" + first.str() + " b=" + second.str() + " v=[" +
         tracekit::to_string(suffix) + "] (" + (first_order_accepted ? "uabv" : "ubav") +
         " accepted)";
}

std::optional<ClosureWitness> is_trace_closed(const Dfa& d, const DependenceRelation& dep) {
  using State = Dfa::State;
  for (const auto& a : d.alphabet())
    if (!dep.contains(a)) throw InputError("DFA letter " + a.str() + " outside dependence scope");

  const Dfa m = minimize(d);
  const std::size_t k = m.num_letters();
  const auto& letters = m.alphabet();
  auto step = [&](State s, std::size_t a) { return s == Dfa::kNone ? Dfa::kNone : m.next(s, a); };
  auto accepts = [&](State s) { return s != Dfa::kNone && m.accepting(s); };

  // Shortest access word for every state (all states of a minimal DFA are reachable).
  std::vector<Word> access(m.num_states());
  std::vector<char> seen(m.num_states(), 0);
  std::vector<State> queue{m.initial()};
  seen[m.initial()] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    State q = queue[head];
    for (std::size_t a = 0; a < k; ++a) {
      State t = m.next(q, a);
      if (t == Dfa::kNone || seen[t]) continue;
      seen[t] = 1;
      access[t] = access[q];
      access[t].push_back(letters[a]);
      queue.push_back(t);
    }
  }

  for (State q : queue) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        if (dep.depends(letters[a], letters[b])) continue;
        State ab = step(step(q, a), b);
        State ba = step(step(q, b), a);
        if (ab == ba) continue;

        // Shortest suffix separating ab from ba, by BFS over state pairs.
        std::map<std::pair<State, State>, std::pair<std::pair<State, State>, std::size_t>> parent;
        std::deque<std::pair<State, State>> frontier{{ab, ba}};
        parent[{ab, ba}] = {{ab, ba}, k};
        std::optional<std::pair<State, State>> hit;
        while (!frontier.empty() && !hit) {
          auto cur = frontier.front();
          frontier.pop_front();
          if (accepts(cur.first) != accepts(cur.second)) {
            hit = cur;
            break;
          }
          for (std::size_t c = 0; c < k; ++c) {
            std::pair<State, State> nxt{step(cur.first, c), step(cur.second, c)};
            if (nxt.first == nxt.second || parent.count(nxt)) continue;
            parent[nxt] = {cur, c};
            frontier.push_back(nxt);
          }
        }
        if (!hit) continue;  // unreachable for a minimal automaton
        Word suffix;
        for (auto cur = *hit; parent[cur].second != k; cur = parent[cur].first)
          suffix.push_back(letters[parent[cur].second]);
        std::reverse(suffix.begin(), suffix.end());
        ClosureWitness witness{access[q], letters[a], letters[b], suffix, false};
        witness.first_order_accepted = run_dfa(m, witness.first_order());
        return witness;
      }
    }
  }
  return std::nullopt;
}

}  // namespace tracekit
