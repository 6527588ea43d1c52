#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tracekit/alphabet.hpp"
#include "tracekit/trace.hpp"

namespace tracekit {

// Rooted tree over processes, given by its parent map.
class ProcessTree {
public:
  ProcessTree() = default;
  ProcessTree(ProcessId root, const std::map<ProcessId, ProcessId>& parent);
  // Edges are (parent, child).
  static ProcessTree from_edges(ProcessId root, const std::vector<std::pair<ProcessId, ProcessId>>& edges);

  const ProcessId& root() const { return root_; }
  const std::vector<ProcessId>& nodes() const { return nodes_; }
  bool contains(const ProcessId& p) const { return parent_.count(p) || p == root_; }
  std::optional<ProcessId> parent(const ProcessId& p) const;
  const std::vector<ProcessId>& children(const ProcessId& p) const;
  std::size_t out_degree(const ProcessId& p) const { return children(p).size(); }
  bool adjacent(const ProcessId& p, const ProcessId& q) const;
  // Unique simple path from p to q, both included.
  std::vector<ProcessId> path(const ProcessId& p, const ProcessId& q) const;

private:
  ProcessId root_;
  std::vector<ProcessId> nodes_;
  std::map<ProcessId, ProcessId> parent_;
  std::map<ProcessId, std::vector<ProcessId>> children_;
};

struct TreeViolation {
  ActionId action;
  ProcessId from;
  ProcessId to;
  ProcessId outside;  // on the tree path from `from` to `to`, not in dom(action)

  std::string message() const;
};

// nullopt iff every action domain induces a connected subtree. Throws StructuralError
// when the tree does not span exactly the alphabet's processes.
std::optional<TreeViolation> validate_tree_like(const DistributedAlphabet& alphabet, const ProcessTree& tree);

struct KnowledgeNode {
  ActionId action;
  EventId event = 0;

  friend bool operator==(const KnowledgeNode&, const KnowledgeNode&) = default;
  friend auto operator<=>(const KnowledgeNode&, const KnowledgeNode&) = default;
};

// Most recent known occurrences of monitored actions (at most one per action) and the
// strict happens-before among them, stored transitively closed.
class KnowledgeDag {
public:
  KnowledgeDag() = default;
  // `order` must be a strict order over the events of `nodes`.
  KnowledgeDag(std::vector<KnowledgeNode> nodes, std::vector<std::pair<EventId, EventId>> order);

  const std::vector<KnowledgeNode>& nodes() const { return nodes_; }
  const std::vector<std::pair<EventId, EventId>>& order() const { return order_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  std::optional<EventId> occurrence(const ActionId& a) const;
  bool before(EventId x, EventId y) const;
  // Transitive reduction of order().
  std::vector<std::pair<EventId, EventId>> edges() const;
  std::string to_string() const;

  // Keeps, per action, the latest occurrence across `parts`, with the order they record.
  static KnowledgeDag merge(const std::vector<const KnowledgeDag*>& parts);
  // Adds `node` above every current node, replacing an older occurrence of its action.
  void add_maximal(const KnowledgeNode& node);

  friend bool operator==(const KnowledgeDag&, const KnowledgeDag&) = default;

private:
  std::vector<KnowledgeNode> nodes_;               // sorted by event
  std::vector<std::pair<EventId, EventId>> order_;  // sorted
};

struct GossipStorage {
  std::size_t dag_nodes = 0;
  std::size_t frontier_records = 0;
  std::size_t gamma_size = 0;
  std::size_t out_degree = 0;

  bool within_bound() const { return dag_nodes <= gamma_size && frontier_records <= out_degree; }
};

// Per-process knowledge plus, per tree child, the last event shared with that child.
class GossipState {
public:
  const DistributedAlphabet& alphabet() const { return ctx_->alphabet; }
  const ProcessTree& tree() const { return ctx_->tree; }
  const std::vector<ActionId>& gamma() const { return ctx_->gamma; }
  EventId last_event() const { return last_; }

  const KnowledgeDag& knowledge(std::size_t process) const { return dags_[process]; }
  const KnowledgeDag& knowledge(const ProcessId& p) const;
  // (child, last joint event) for the children that ever synchronised with p.
  std::vector<std::pair<ProcessId, EventId>> frontier(const ProcessId& p) const;
  GossipStorage storage(const ProcessId& p) const;

  friend bool operator==(const GossipState& a, const GossipState& b) {
    return a.dags_ == b.dags_ && a.frontier_ == b.frontier_ && a.last_ == b.last_;
  }

private:
  struct Context {
    DistributedAlphabet alphabet;
    ProcessTree tree;
    std::vector<ActionId> gamma;
    std::vector<char> monitored;                          // per action index
    std::vector<std::vector<std::size_t>> children;       // per process index
  };

  friend GossipState gossip_init(const DistributedAlphabet&, const ProcessTree&, const std::vector<ActionId>&);
  friend GossipState gossip_step(const GossipState&, const ActionId&, EventId);

  std::shared_ptr<const Context> ctx_;
  std::vector<KnowledgeDag> dags_;
  std::vector<std::map<std::size_t, EventId>> frontier_;
  EventId last_ = 0;
};

GossipState gossip_init(const DistributedAlphabet& alphabet, const ProcessTree& tree,
                        const std::vector<ActionId>& gamma);

// Processes of dom(a) pool their knowledge, keep the latest occurrence of each monitored
// action, and add (a, eid) on top when a is monitored. Event ids must increase.
GossipState gossip_step(const GossipState& state, const ActionId& a, EventId eid);

KnowledgeDag knowledge_of(const GossipState& state, const ProcessId& p);

// Snapshots before the first event and after every event.
std::vector<GossipState> replay(const Word& w, const DistributedAlphabet& alphabet, const ProcessTree& tree,
                                const std::vector<ActionId>& gamma);

// Ground truth from the global trace of w[1..upto]: the causal past of p's last event,
// its latest occurrence of each monitored action, and their happens-before.
KnowledgeDag oracle_knowledge(const Word& w, const DistributedAlphabet& alphabet,
                              const std::vector<ActionId>& gamma, const ProcessId& p, std::size_t upto);
// Same, reading the order from a trace of any extension of w[1..upto].
KnowledgeDag oracle_knowledge(const TraceOrder& trace, const DistributedAlphabet& alphabet,
                              const std::vector<ActionId>& gamma, const ProcessId& p, std::size_t upto);

}  // namespace tracekit
