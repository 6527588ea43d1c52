#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tracekit/alphabet.hpp"

namespace tracekit {

// Deterministic automaton with a partial transition function; a missing transition
// behaves like a rejecting sink.
class Dfa {
public:
  using State = std::uint32_t;
  static constexpr State kNone = std::numeric_limits<State>::max();

  Dfa() = default;
  Dfa(std::vector<ActionId> alphabet, std::size_t num_states, State initial = 0);

  const std::vector<ActionId>& alphabet() const { return alphabet_; }
  std::size_t num_letters() const { return alphabet_.size(); }
  std::size_t num_states() const { return accepting_.size(); }
  State initial() const { return initial_; }

  std::optional<std::size_t> letter_index(const ActionId& a) const;
  bool accepting(State s) const { return accepting_[s] != 0; }
  State next(State s, std::size_t letter) const { return delta_[s * alphabet_.size() + letter]; }
  State next(State s, const ActionId& a) const;

  void set_accepting(State s, bool accept = true);
  void set_transition(State from, const ActionId& a, State to);
  void set_transition(State from, std::size_t letter, State to);

  const std::string& state_name(State s) const { return names_[s]; }
  void set_state_name(State s, std::string name) { names_[s] = std::move(name); }

  // State reached on `w` from `from`, or kNone if some transition is missing.
  State walk(State from, const Word& w) const;

private:
  void check_state(State s) const;

  std::vector<ActionId> alphabet_;
  std::unordered_map<ActionId, std::size_t> letter_index_;
  std::vector<char> accepting_;
  std::vector<State> delta_;
  std::vector<std::string> names_;
  State initial_ = 0;
};

bool run_dfa(const Dfa& d, const Word& w);

// Minimal partial DFA for L(d): reachable, no two equivalent states, no dead state
// (unless the language is empty, in which case the single initial state remains).
// States are numbered in breadth-first order from the initial state, so two minimal
// automata for the same language are identical up to state names.
Dfa minimize(const Dfa& d);

// Same transition structure and acceptance after canonical renumbering.
bool isomorphic(const Dfa& a, const Dfa& b);

// u·first·second·v and u·second·first·v, exactly one of which is accepted.
struct ClosureWitness {
  Word prefix;
  ActionId first;
  ActionId second;
  Word suffix;
  bool first_order_accepted = false;

  Word first_order() const;
  Word second_order() const;
  std::string to_string() const;
};

std::optional<ClosureWitness> is_trace_closed(const Dfa& d, const DependenceRelation& dep);

}  // namespace tracekit
