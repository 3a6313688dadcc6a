#include "treelce/lce_tt.hpp"

#include <algorithm>
#include <numeric>

namespace treelce {

void ClusterPartition::emit(const LabeledTree& tree, std::vector<NodeId>&& edges) {
  Cluster c;
  c.edges = std::move(edges);
  c.nodes.reserve(c.edges.size() + 1);
  for (NodeId e : c.edges) {
    c.nodes.push_back(e);
    c.nodes.push_back(tree.parent[e]);
  }
  std::sort(c.nodes.begin(), c.nodes.end());
  c.nodes.erase(std::unique(c.nodes.begin(), c.nodes.end()), c.nodes.end());
  clusters_.push_back(std::move(c));
}

void ClusterPartition::build(const LabeledTree& tree, std::int64_t tau) {
  if (tree.n <= 1) throw PreconditionError("cluster partition requires n > 1");
  if (tau < 1 || tau > tree.n) throw PreconditionError("tau out of range [1, n]");
  tau_ = tau;
  clusters_.clear();

  const std::size_t n = static_cast<std::size_t>(tree.n);
  const std::int64_t target = (tree.n + tau - 1) / tau;  // ceil(n / tau)

  // Pending edge group per node: a connected piece containing the node, with
  // at most one interior node already adjacent to an emitted cluster (deep).
  struct Group {
    std::vector<NodeId> edges;
    NodeId deep = kNoNode;
  };
  std::vector<Group> pending(n);
  std::vector<std::uint8_t> emitted_at(n, 0);

  // Post-order via euler_out: children always precede their parent.
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](NodeId a, NodeId b) { return tree.euler_out[a] < tree.euler_out[b]; });

  for (NodeId v : order) {
    Group& mine = pending[v];
    for (auto [sym, c] : tree.children[v]) {
      Group child = std::move(pending[c]);
      child.edges.push_back(c);  // edge (v, c)
      if (emitted_at[c]) child.deep = c;
      if (child.deep != kNoNode && mine.deep != kNoNode) {
        emit(tree, std::move(child.edges));
        emitted_at[v] = 1;
        continue;
      }
      if (child.deep != kNoNode) mine.deep = child.deep;
      mine.edges.insert(mine.edges.end(), child.edges.begin(), child.edges.end());
      if (static_cast<std::int64_t>(mine.edges.size()) >= target) {
        emit(tree, std::move(mine.edges));
        emitted_at[v] = 1;
        mine = Group{};
      }
    }
    // Keep the one-deferred-boundary invariant before handing the group up.
    if (emitted_at[v] && mine.deep != kNoNode) {
      emit(tree, std::move(mine.edges));
      mine = Group{};
    }
    if (v == 0 && !mine.edges.empty()) emit(tree, std::move(mine.edges));
  }

  // Boundary nodes: any incident edge outside the cluster means an adjacent
  // node outside it (the converse would close a cycle).
  std::vector<std::int64_t> deg(n, 0);
  for (std::size_t v = 1; v < n; ++v) {
    ++deg[v];
    ++deg[tree.parent[v]];
  }
  membership_.assign(n, {});
  boundary_of_.assign(n, kNoPos);
  boundary_nodes_.clear();
  std::vector<std::int64_t> indeg(n, 0);
  for (std::size_t ci = 0; ci < clusters_.size(); ++ci) {
    Cluster& c = clusters_[ci];
    for (NodeId e : c.edges) {
      ++indeg[e];
      ++indeg[tree.parent[e]];
    }
    for (NodeId u : c.nodes) {
      membership_[u].push_back(static_cast<std::uint32_t>(ci));
      if (indeg[u] != deg[u]) c.boundary.push_back(u);
      indeg[u] = 0;
    }
  }
  for (const Cluster& c : clusters_)
    for (NodeId b : c.boundary)
      if (boundary_of_[b] == kNoPos) {
        boundary_of_[b] = static_cast<std::uint32_t>(boundary_nodes_.size());
        boundary_nodes_.push_back(b);
      }
}

TtIndex::Entry TtIndex::lookup(NodeId node, NodeId boundary) const {
  return table_[static_cast<std::size_t>(node) * partition_.boundary_nodes().size() +
                partition_.boundary_index(boundary)];
}

LceTtResult TtIndex::table_entry(NodeId v, NodeId boundary) const {
  if (!partition_.is_boundary(boundary))
    throw PreconditionError("node " + std::to_string(boundary) + " is not a boundary node");
  Entry e = lookup(v, boundary);
  return LceTtResult{e.len, e.e1, e.e2};
}

TtIndex::Entry TtIndex::descend(NodeId x0, NodeId y0, QueryStats* stats) const {
  const LabeledTree& tree = *tree_;
  const auto& pre = tree.euler_in;
  Entry best{0, x0, y0};
  auto consider = [&](std::int64_t len, NodeId e1, NodeId e2) {
    if (len > best.len ||
        (len == best.len &&
         std::make_pair(pre[e1], pre[e2]) < std::make_pair(pre[best.e1], pre[best.e2])))
      best = Entry{len, e1, e2};
  };

  struct Frame {
    NodeId x, y;
    std::int64_t dist;
  };
  std::vector<Frame> stack{{x0, y0, 0}};
  while (!stack.empty()) {
    auto [x, y, t] = stack.back();
    stack.pop_back();
    if (t > 0 && (partition_.is_boundary(x) || partition_.is_boundary(y))) {
      // Boundary hit: splice in the precomputed answer for the deeper pair.
      if (partition_.is_boundary(y)) {
        Entry e = lookup(x, y);
        consider(t + e.len, e.len ? e.e1 : x, e.len ? e.e2 : y);
      } else {
        Entry e = lookup(y, x);
        consider(t + e.len, e.len ? e.e2 : x, e.len ? e.e1 : y);
      }
      continue;
    }
    consider(t, x, y);
    const auto& cx = tree.children[x];
    const auto& cy = tree.children[y];
    std::size_t i = 0, j = 0;
    while (i < cx.size() && j < cy.size()) {
      if (cx[i].first == cy[j].first) {
        bump(stats, &QueryStats::traversal_steps);
        stack.push_back({cx[i].second, cy[j].second, t + 1});
        ++i;
        ++j;
      } else if (cx[i].first < cy[j].first) {
        ++i;
      } else {
        ++j;
      }
    }
  }
  return best;
}

void TtIndex::build(const LabeledTree& tree, std::int64_t tau) {
  tree_ = &tree;
  tau_ = tau;
  table_.clear();
  if (tree.n <= 1) return;
  partition_.build(tree, tau);

  const std::size_t n = static_cast<std::size_t>(tree.n);
  const std::size_t nb = partition_.boundary_nodes().size();
  table_.assign(n * nb, Entry{0, kNoNode, kNoNode});

  // Entries depend only on strictly deeper pairs, so one sweep in decreasing
  // depth-sum order closes the memoization.
  struct Job {
    NodeId v;
    std::uint32_t bi;
    std::int64_t depth_sum;
  };
  std::vector<Job> jobs;
  jobs.reserve(n * nb);
  for (std::size_t v = 0; v < n; ++v)
    for (std::uint32_t bi = 0; bi < nb; ++bi)
      jobs.push_back({static_cast<NodeId>(v), bi,
                      tree.depth[v] + tree.depth[partition_.boundary_nodes()[bi]]});
  std::sort(jobs.begin(), jobs.end(),
            [](const Job& a, const Job& b) { return a.depth_sum > b.depth_sum; });
  for (const Job& job : jobs)
    table_[static_cast<std::size_t>(job.v) * nb + job.bi] =
        descend(job.v, partition_.boundary_nodes()[job.bi], nullptr);
}

LceTtResult TtIndex::query(NodeId v1, NodeId v2, QueryStats* stats) const {
  tree_->require_node(v1);
  tree_->require_node(v2);
  if (tree_->n <= 1) return LceTtResult{0, v1, v2};
  Entry e{};
  if (partition_.is_boundary(v2)) {
    e = lookup(v1, v2);
  } else if (partition_.is_boundary(v1)) {
    Entry t = lookup(v2, v1);
    e = Entry{t.len, t.e2, t.e1};
  } else {
    e = descend(v1, v2, stats);
  }
  if (e.len == 0) return LceTtResult{0, v1, v2};
  return LceTtResult{e.len, e.e1, e.e2};
}

SetFamilyTree family_to_tree(const std::vector<std::vector<std::int64_t>>& sets) {
  if (sets.empty()) throw PreconditionError("empty set family");

  // Zero-padded element tokens keep byte order equal to numeric order; set
  // edges get '#'-prefixed tokens, distinct from every element token.
  std::int64_t max_elem = 0;
  for (const auto& s : sets)
    for (std::int64_t e : s) {
      if (e < 0) throw PreconditionError("set elements must be non-negative");
      max_elem = std::max(max_elem, e);
    }
  int width = 1;
  for (std::int64_t cap = 10; cap <= max_elem; cap *= 10) ++width;
  auto elem_token = [&](std::int64_t e) {
    std::string d = std::to_string(e);
    return std::string(static_cast<std::size_t>(width) - d.size(), '0') + d;
  };
  int swidth = 1;
  for (std::size_t cap = 10; cap <= sets.size(); cap *= 10) ++swidth;
  auto set_token = [&](std::size_t i) {
    std::string d = std::to_string(i);
    return "#" + std::string(static_cast<std::size_t>(swidth) - d.size(), '0') + d;
  };

  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    tokens.push_back(set_token(i));
    for (std::int64_t e : sets[i]) tokens.push_back(elem_token(e));
  }
  SymbolTable symbols = SymbolTable::from_tokens(std::move(tokens));

  SetFamilyTree out;
  LabeledTree& t = out.tree;
  t.parent.push_back(kNoNode);
  t.label.push_back(kNoSymbol);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    NodeId vi = static_cast<NodeId>(t.parent.size());
    out.set_node.push_back(vi);
    t.parent.push_back(0);
    t.label.push_back(symbols.id_of(set_token(i)));
    std::vector<std::int64_t> elems = sets[i];
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    for (std::int64_t e : elems) {
      t.parent.push_back(vi);
      t.label.push_back(symbols.id_of(elem_token(e)));
    }
  }
  t.n = static_cast<std::int64_t>(t.parent.size());
  t.finalize();
  out.symbols = std::move(symbols);
  return out;
}

bool disjoint(const TtIndex& idx, const SetFamilyTree& fam, std::size_t i, std::size_t j,
              QueryStats* stats) {
  if (i >= fam.set_node.size() || j >= fam.set_node.size())
    throw PreconditionError("set index out of range");
  return idx.query(fam.set_node[i], fam.set_node[j], stats).length == 0;
}

}  // namespace treelce
