#include "tracekit/gossip.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace tracekit {

ProcessTree::ProcessTree(ProcessId root, const std::map<ProcessId, ProcessId>& parent)
    : root_(std::move(root)), parent_(parent) {
  if (parent_.count(root_)) throw InputError("tree root " + root_.str() + " has a parent");
  std::set<ProcessId> all{root_};
  for (const auto& [child, par] : parent_) {
    all.insert(child);
    all.insert(par);
  }
  nodes_.assign(all.begin(), all.end());
  for (const auto& p : nodes_) children_[p];
  for (const auto& [child, par] : parent_) children_[par].push_back(child);

  // Every node must reach the root without revisiting anything.
  for (const auto& p : nodes_) {
    std::set<ProcessId> seen{p};
    ProcessId cur = p;
    while (cur != root_) {
      auto it = parent_.find(cur);
      if (it == parent_.end()) throw InputError("process " + cur.str() + " is not connected to the tree root");
      cur = it->second;
      if (!seen.insert(cur).second) throw InputError("process tree has a cycle through " + cur.str());
    }
  }
}

ProcessTree ProcessTree::from_edges(ProcessId root, const std::vector<std::pair<ProcessId, ProcessId>>& edges) {
  std::map<ProcessId, ProcessId> parent;
  for (const auto& [par, child] : edges)
    if (!parent.emplace(child, par).second) throw InputError("process " + child.str() + " has two parents");
  return ProcessTree(std::move(root), parent);
}

std::optional<ProcessId> ProcessTree::parent(const ProcessId& p) const {
  auto it = parent_.find(p);
  if (it == parent_.end()) return std::nullopt;
  return it->second;
}

const std::vector<ProcessId>& ProcessTree::children(const ProcessId& p) const {
  auto it = children_.find(p);
  if (it == children_.end()) throw InputError("process " + p.str() + " is not in the tree");
  return it->second;
}

bool ProcessTree::adjacent(const ProcessId& p, const ProcessId& q) const {
  auto pp = parent(p), pq = parent(q);
  return (pp && *pp == q) || (pq && *pq == p);
}

std::vector<ProcessId> ProcessTree::path(const ProcessId& p, const ProcessId& q) const {
  auto to_root = [&](ProcessId x) {
    std::vector<ProcessId> out{x};
    while (auto par = parent(x)) {
      out.push_back(*par);
      x = *par;
    }
    return out;
  };
  auto up = to_root(p), down = to_root(q);
  while (up.size() > 1 && down.size() > 1 && up[up.size() - 2] == down[down.size() - 2]) {
    up.pop_back();
    down.pop_back();
  }
  // up and down now both end at the lowest common ancestor.
  down.pop_back();
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

std::string TreeViolation::message() const {
  return "domain of " + action.str() + " is not connected: path " + from.str() + " .. " + to.str() +
         " leaves it at " + outside.str();
}

std::optional<TreeViolation> validate_tree_like(const DistributedAlphabet& alphabet, const ProcessTree& tree) {
  if (tree.nodes() != alphabet.processes()) throw StructuralError("process tree does not span the alphabet's processes");
  for (std::size_t a = 0; a < alphabet.num_actions(); ++a) {
    const auto& dom = alphabet.domain(a);
    std::set<ProcessId> members;
    for (std::size_t p : dom) members.insert(alphabet.processes()[p]);
    const ProcessId& start = alphabet.processes()[dom.front()];
    std::set<ProcessId> reached{start};
    std::deque<ProcessId> queue{start};
    while (!queue.empty()) {
      ProcessId cur = queue.front();
      queue.pop_front();
      std::vector<ProcessId> next = tree.children(cur);
      if (auto par = tree.parent(cur)) next.push_back(*par);
      for (const auto& n : next)
        if (members.count(n) && reached.insert(n).second) queue.push_back(n);
    }
    for (const auto& m : members) {
      if (reached.count(m)) continue;
      for (const auto& hop : tree.path(start, m))
        if (!members.count(hop)) return TreeViolation{alphabet.actions()[a], start, m, hop};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

KnowledgeDag::KnowledgeDag(std::vector<KnowledgeNode> nodes, std::vector<std::pair<EventId, EventId>> order)
    : nodes_(std::move(nodes)), order_(std::move(order)) {
  std::sort(nodes_.begin(), nodes_.end(), [](const auto& x, const auto& y) { return x.event < y.event; });
  std::sort(order_.begin(), order_.end());
  order_.erase(std::unique(order_.begin(), order_.end()), order_.end());
}

std::optional<EventId> KnowledgeDag::occurrence(const ActionId& a) const {
  for (const auto& n : nodes_)
    if (n.action == a) return n.event;
  return std::nullopt;
}

bool KnowledgeDag::before(EventId x, EventId y) const {
  return std::binary_search(order_.begin(), order_.end(), std::make_pair(x, y));
}

std::vector<std::pair<EventId, EventId>> KnowledgeDag::edges() const {
  std::vector<std::pair<EventId, EventId>> out;
  for (const auto& [x, y] : order_) {
    bool implied = std::any_of(nodes_.begin(), nodes_.end(),
                               [&](const KnowledgeNode& z) { return before(x, z.event) && before(z.event, y); });
    if (!implied) out.emplace_back(x, y);
  }
  return out;
}

std::string KnowledgeDag::to_string() const {
  if (nodes_.empty()) return "{}";
  auto name = [&](EventId e) {
    for (const auto& n : nodes_)
      if (n.event == e) return n.action.str() + "@" + std::to_string(e);
    return std::string("?");
  };
  std::string out;
  std::set<EventId> touched;
  for (const auto& [x, y] : edges()) {
    if (!out.empty()) out += ", ";
    out += name(x) + " -> " + name(y);
    touched.insert(x);
    touched.insert(y);
  }
  for (const auto& n : nodes_) {
    if (touched.count(n.event)) continue;
    if (!out.empty()) out += ", ";
    out += name(n.event);
  }
  return out;
}

KnowledgeDag KnowledgeDag::merge(const std::vector<const KnowledgeDag*>& parts) {
  std::map<ActionId, EventId> latest;
  for (const auto* d : parts)
    for (const auto& n : d->nodes_) {
      auto [it, fresh] = latest.emplace(n.action, n.event);
      if (!fresh) it->second = std::max(it->second, n.event);
    }
  std::set<EventId> kept;
  std::vector<KnowledgeNode> nodes;
  for (const auto& [a, e] : latest) {
    kept.insert(e);
    nodes.push_back({a, e});
  }
  std::vector<std::pair<EventId, EventId>> order;
  for (const auto* d : parts)
    for (const auto& [x, y] : d->order_)
      if (kept.count(x) && kept.count(y)) order.emplace_back(x, y);
  return KnowledgeDag(std::move(nodes), std::move(order));
}

void KnowledgeDag::add_maximal(const KnowledgeNode& node) {
  if (auto old = occurrence(node.action)) {
    nodes_.erase(std::find_if(nodes_.begin(), nodes_.end(), [&](const auto& n) { return n.event == *old; }));
    std::erase_if(order_, [&](const auto& p) { return p.first == *old || p.second == *old; });
  }
  for (const auto& n : nodes_) order_.emplace_back(n.event, node.event);
  nodes_.push_back(node);
  std::sort(order_.begin(), order_.end());
}

// ---------------------------------------------------------------------------

const KnowledgeDag& GossipState::knowledge(const ProcessId& p) const {
  return dags_[ctx_->alphabet.require_process(p)];
}

std::vector<std::pair<ProcessId, EventId>> GossipState::frontier(const ProcessId& p) const {
  std::vector<std::pair<ProcessId, EventId>> out;
  for (const auto& [child, e] : frontier_[ctx_->alphabet.require_process(p)])
    out.emplace_back(ctx_->alphabet.processes()[child], e);
  return out;
}

GossipStorage GossipState::storage(const ProcessId& p) const {
  const std::size_t idx = ctx_->alphabet.require_process(p);
  return GossipStorage{dags_[idx].size(), frontier_[idx].size(), ctx_->gamma.size(), ctx_->children[idx].size()};
}

GossipState gossip_init(const DistributedAlphabet& alphabet, const ProcessTree& tree,
                        const std::vector<ActionId>& gamma) {
  if (auto v = validate_tree_like(alphabet, tree)) throw InputError("alphabet is not tree-like: " + v->message());
  auto ctx = std::make_shared<GossipState::Context>();
  ctx->alphabet = alphabet;
  ctx->tree = tree;
  ctx->monitored.assign(alphabet.num_actions(), 0);
  for (const auto& a : gamma) ctx->monitored[alphabet.require_action(a)] = 1;
  for (std::size_t a = 0; a < alphabet.num_actions(); ++a)
    if (ctx->monitored[a]) ctx->gamma.push_back(alphabet.actions()[a]);
  ctx->children.resize(alphabet.num_processes());
  for (std::size_t p = 0; p < alphabet.num_processes(); ++p)
    for (const auto& c : tree.children(alphabet.processes()[p]))
      ctx->children[p].push_back(alphabet.require_process(c));

  GossipState st;
  st.ctx_ = std::move(ctx);
  st.dags_.resize(alphabet.num_processes());
  st.frontier_.resize(alphabet.num_processes());
  return st;
}

GossipState gossip_step(const GossipState& state, const ActionId& a, EventId eid) {
  const auto& ctx = *state.ctx_;
  const std::size_t action = ctx.alphabet.require_action(a);
  if (eid <= state.last_)
    throw InputError("event id " + std::to_string(eid) + " does not follow " + std::to_string(state.last_));
  const auto& dom = ctx.alphabet.domain(action);

  std::vector<const KnowledgeDag*> parts;
  for (std::size_t p : dom) parts.push_back(&state.dags_[p]);
  KnowledgeDag merged = KnowledgeDag::merge(parts);
  if (ctx.monitored[action]) merged.add_maximal({a, eid});

  GossipState next = state;
  next.last_ = eid;
  for (std::size_t p : dom) {
    next.dags_[p] = merged;
    for (std::size_t c : ctx.children[p])
      if (ctx.alphabet.in_domain(action, c)) next.frontier_[p][c] = eid;
  }
  return next;
}

KnowledgeDag knowledge_of(const GossipState& state, const ProcessId& p) { return state.knowledge(p); }

std::vector<GossipState> replay(const Word& w, const DistributedAlphabet& alphabet, const ProcessTree& tree,
                                const std::vector<ActionId>& gamma) {
  std::vector<GossipState> snapshots{gossip_init(alphabet, tree, gamma)};
  snapshots.reserve(w.size() + 1);
  for (std::size_t i = 0; i < w.size(); ++i) snapshots.push_back(gossip_step(snapshots.back(), w[i], i + 1));
  return snapshots;
}

KnowledgeDag oracle_knowledge(const TraceOrder& trace, const DistributedAlphabet& alphabet,
                              const std::vector<ActionId>& gamma, const ProcessId& p, std::size_t upto) {
  const std::size_t proc = alphabet.require_process(p);
  if (upto > trace.size()) throw InputError("prefix length exceeds the trace");
  std::set<ActionId> monitored(gamma.begin(), gamma.end());

  EventId view = 0;
  for (EventId e = upto; e >= 1; --e)
    if (alphabet.in_domain(alphabet.require_action(trace.label(e)), proc)) {
      view = e;
      break;
    }
  if (view == 0) return {};

  std::map<ActionId, EventId> latest;
  for (EventId e = 1; e <= view; ++e)
    if (monitored.count(trace.label(e)) && trace.happens_before(e, view)) latest[trace.label(e)] = e;

  std::vector<KnowledgeNode> nodes;
  for (const auto& [a, e] : latest) nodes.push_back({a, e});
  std::vector<std::pair<EventId, EventId>> order;
  for (const auto& x : nodes)
    for (const auto& y : nodes)
      if (trace.strictly_before(x.event, y.event)) order.emplace_back(x.event, y.event);
  return KnowledgeDag(std::move(nodes), std::move(order));
}

KnowledgeDag oracle_knowledge(const Word& w, const DistributedAlphabet& alphabet, const std::vector<ActionId>& gamma,
                              const ProcessId& p, std::size_t upto) {
  if (upto > w.size()) throw InputError("prefix length exceeds the word");
  const Word prefix(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(upto));
  return oracle_knowledge(trace_of_word(prefix, induced_dependence(alphabet)), alphabet, gamma, p, upto);
}

}  // namespace tracekit
