#include "tracekit/alphabet.hpp"

#include <algorithm>
#include <set>

namespace tracekit {

std::string to_string(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += w[i].str();
  }
  return out;
}

DistributedAlphabet::DistributedAlphabet(std::vector<ProcessId> processes,
                                         const std::map<ActionId, std::vector<ProcessId>>& dom) {
  std::sort(processes.begin(), processes.end());
  if (std::adjacent_find(processes.begin(), processes.end()) != processes.end())
    throw InputError("duplicate process in alphabet");
  processes_ = std::move(processes);
  for (std::size_t i = 0; i < processes_.size(); ++i) process_index_.emplace(processes_[i], i);

  for (const auto& [action, procs] : dom) {
    if (procs.empty()) throw InputError("empty domain for action " + action.str());
    std::vector<std::size_t> idx;
    for (const auto& p : procs) {
      auto it = process_index_.find(p);
      if (it == process_index_.end())
        throw InputError("domain of " + action.str() + " names unknown process " + p.str());
      idx.push_back(it->second);
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    action_index_.emplace(action, actions_.size());
    actions_.push_back(action);
    dom_.push_back(std::move(idx));
  }
}

std::optional<std::size_t> DistributedAlphabet::action_index(const ActionId& a) const {
  auto it = action_index_.find(a);
  if (it == action_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> DistributedAlphabet::process_index(const ProcessId& p) const {
  auto it = process_index_.find(p);
  if (it == process_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t DistributedAlphabet::require_action(const ActionId& a) const {
  if (auto i = action_index(a)) return *i;
  throw InputError("unknown action " + a.str());
}

std::size_t DistributedAlphabet::require_process(const ProcessId& p) const {
  if (auto i = process_index(p)) return *i;
  throw InputError("unknown process " + p.str());
}

std::vector<ProcessId> DistributedAlphabet::domain(const ActionId& a) const {
  std::vector<ProcessId> out;
  for (auto p : dom_[require_action(a)]) out.push_back(processes_[p]);
  return out;
}

bool DistributedAlphabet::in_domain(std::size_t action, std::size_t process) const {
  const auto& d = dom_[action];
  return std::binary_search(d.begin(), d.end(), process);
}

DependenceRelation::DependenceRelation(std::vector<ActionId> actions) {
  std::sort(actions.begin(), actions.end());
  actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
  actions_ = std::move(actions);
  for (std::size_t i = 0; i < actions_.size(); ++i) index_.emplace(actions_[i], i);
  matrix_.assign(actions_.size() * actions_.size(), 0);
}

DependenceRelation DependenceRelation::from_pairs(
    std::vector<ActionId> actions, const std::vector<std::pair<ActionId, ActionId>>& pairs) {
  DependenceRelation rel(std::move(actions));
  for (std::size_t i = 0; i < rel.size(); ++i) rel.set(i, i);
  for (const auto& [a, b] : pairs) {
    auto i = rel.index_of(a), j = rel.index_of(b);
    if (!i || !j) throw InputError("dependence pair (" + a.str() + "," + b.str() + ") outside scope");
    rel.set(*i, *j);
    rel.set(*j, *i);
  }
  return rel;
}

DependenceRelation DependenceRelation::raw(
    std::vector<ActionId> actions, const std::vector<std::pair<ActionId, ActionId>>& pairs) {
  DependenceRelation rel(std::move(actions));
  for (const auto& [a, b] : pairs) {
    auto i = rel.index_of(a), j = rel.index_of(b);
    if (!i || !j) throw InputError("dependence pair (" + a.str() + "," + b.str() + ") outside scope");
    rel.set(*i, *j);
  }
  return rel;
}

std::optional<std::size_t> DependenceRelation::index_of(const ActionId& a) const {
  auto it = index_.find(a);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool DependenceRelation::depends(const ActionId& a, const ActionId& b) const {
  auto i = index_of(a), j = index_of(b);
  if (!i) throw InputError("unknown action " + a.str());
  if (!j) throw InputError("unknown action " + b.str());
  return depends(*i, *j);
}

std::vector<std::size_t> DependenceRelation::resolve(const Word& w) const {
  std::vector<std::size_t> out;
  out.reserve(w.size());
  for (std::size_t pos = 0; pos < w.size(); ++pos) {
    auto i = index_of(w[pos]);
    if (!i)
      throw InputError("unknown action '" + w[pos].str() + "' at position " + std::to_string(pos + 1));
    out.push_back(*i);
  }
  return out;
}

DependenceRelation induced_dependence(const DistributedAlphabet& alphabet) {
  std::vector<std::pair<ActionId, ActionId>> pairs;
  const auto& acts = alphabet.actions();
  for (std::size_t i = 0; i < acts.size(); ++i) {
    for (std::size_t j = i + 1; j < acts.size(); ++j) {
      const auto& di = alphabet.domain(i);
      const auto& dj = alphabet.domain(j);
      std::vector<std::size_t> common;
      std::set_intersection(di.begin(), di.end(), dj.begin(), dj.end(), std::back_inserter(common));
      if (!common.empty()) pairs.emplace_back(acts[i], acts[j]);
    }
  }
  // Domains are nonempty, so the diagonal added by from_pairs is exactly dom(a) ∩ dom(a) ≠ ∅.
  return DependenceRelation::from_pairs(acts, pairs);
}

std::string DependenceViolation::message() const {
  if (kind == Kind::not_reflexive) return "not reflexive at " + first.str();
  return "not symmetric at (" + first.str() + "," + second.str() + ")";
}

std::optional<DependenceViolation> validate_dependence(const DependenceRelation& rel,
                                                       const std::vector<ActionId>& actions) {
  std::vector<ActionId> scope = actions;
  std::sort(scope.begin(), scope.end());
  for (const auto& a : scope) {
    auto i = rel.index_of(a);
    if (!i || !rel.depends(*i, *i))
      return DependenceViolation{DependenceViolation::Kind::not_reflexive, a, a};
  }
  for (std::size_t i = 0; i < rel.size(); ++i)
    for (std::size_t j = 0; j < rel.size(); ++j)
      if (rel.depends(i, j) && !rel.depends(j, i))
        return DependenceViolation{DependenceViolation::Kind::not_symmetric, rel.actions()[i],
                                   rel.actions()[j]};
  return std::nullopt;
}

}  // namespace tracekit
