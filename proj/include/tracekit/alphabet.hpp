#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tracekit/names.hpp"

namespace tracekit {

using Word = std::vector<ActionId>;

std::string to_string(const Word& w);

// Actions, processes and the domain function dom: action -> nonempty process set.
// Actions and processes are kept sorted by name; indices below refer to that order.
class DistributedAlphabet {
public:
  DistributedAlphabet() = default;
  DistributedAlphabet(std::vector<ProcessId> processes,
                      const std::map<ActionId, std::vector<ProcessId>>& dom);

  const std::vector<ActionId>& actions() const { return actions_; }
  const std::vector<ProcessId>& processes() const { return processes_; }
  std::size_t num_actions() const { return actions_.size(); }
  std::size_t num_processes() const { return processes_.size(); }

  std::optional<std::size_t> action_index(const ActionId& a) const;
  std::optional<std::size_t> process_index(const ProcessId& p) const;
  std::size_t require_action(const ActionId& a) const;
  std::size_t require_process(const ProcessId& p) const;

  // Sorted process indices of dom(a).
  const std::vector<std::size_t>& domain(std::size_t action) const { return dom_[action]; }
  std::vector<ProcessId> domain(const ActionId& a) const;
  bool in_domain(std::size_t action, std::size_t process) const;

  friend bool operator==(const DistributedAlphabet& a, const DistributedAlphabet& b) {
    return a.actions_ == b.actions_ && a.processes_ == b.processes_ && a.dom_ == b.dom_;
  }

private:
  std::vector<ActionId> actions_;
  std::vector<ProcessId> processes_;
  std::vector<std::vector<std::size_t>> dom_;
  std::unordered_map<ActionId, std::size_t> action_index_;
  std::unordered_map<ProcessId, std::size_t> process_index_;
};

// A binary relation over a finite action scope. Well-formed dependence relations are
// reflexive and symmetric; `raw` can hold anything so that validate_dependence has
// something to reject.
class DependenceRelation {
public:
  DependenceRelation() = default;

  // Reflexive-symmetric closure of `pairs` over `actions`.
  static DependenceRelation from_pairs(std::vector<ActionId> actions,
                                       const std::vector<std::pair<ActionId, ActionId>>& pairs);
  // Exactly the given ordered pairs.
  static DependenceRelation raw(std::vector<ActionId> actions,
                                const std::vector<std::pair<ActionId, ActionId>>& pairs);

  const std::vector<ActionId>& actions() const { return actions_; }
  std::size_t size() const { return actions_.size(); }
  std::optional<std::size_t> index_of(const ActionId& a) const;
  bool contains(const ActionId& a) const { return index_of(a).has_value(); }

  bool depends(std::size_t i, std::size_t j) const { return matrix_[i * actions_.size() + j] != 0; }
  bool depends(const ActionId& a, const ActionId& b) const;
  bool independent(const ActionId& a, const ActionId& b) const { return !depends(a, b); }

  // Resolves every letter to its index; throws InputError naming the first unknown
  // letter and its 1-based position.
  std::vector<std::size_t> resolve(const Word& w) const;

  friend bool operator==(const DependenceRelation& a, const DependenceRelation& b) {
    return a.actions_ == b.actions_ && a.matrix_ == b.matrix_;
  }

private:
  explicit DependenceRelation(std::vector<ActionId> actions);
  void set(std::size_t i, std::size_t j) { matrix_[i * actions_.size() + j] = 1; }

  std::vector<ActionId> actions_;
  std::unordered_map<ActionId, std::size_t> index_;
  std::vector<char> matrix_;
};

DependenceRelation induced_dependence(const DistributedAlphabet& alphabet);

struct DependenceViolation {
  enum class Kind { not_reflexive, not_symmetric };
  Kind kind;
  ActionId first;
  ActionId second;

  std::string message() const;
};

// nullopt when `rel` is reflexive over `actions` and symmetric.
std::optional<DependenceViolation> validate_dependence(const DependenceRelation& rel,
                                                       const std::vector<ActionId>& actions);

}  // namespace tracekit
