#include "treelce/naming.hpp"

#include <algorithm>
#include <bit>

namespace treelce {

namespace {

int floor_log2(std::int64_t x) { return 63 - std::countl_zero(static_cast<std::uint64_t>(x)); }

// Stable counting sort of `idx` by key[node]; keys must be < bound.
void counting_sort(std::vector<NodeId>& idx, std::vector<NodeId>& tmp,
                   const std::vector<std::uint32_t>& key, std::uint32_t bound,
                   std::vector<std::uint32_t>& cnt) {
  cnt.assign(bound + 1, 0);
  for (NodeId v : idx) ++cnt[key[v]];
  std::uint32_t sum = 0;
  for (std::uint32_t& c : cnt) {
    std::uint32_t t = c;
    c = sum;
    sum += t;
  }
  tmp.resize(idx.size());
  for (NodeId v : idx) tmp[cnt[key[v]]++] = v;
  idx.swap(tmp);
}

}  // namespace

void SortedPathList::build(const NamingIndex& naming, std::vector<NodeId> nodes,
                           std::int64_t path_len) {
  path_len_ = path_len;
  struct Keyed {
    PathName name;
    NodeId node;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(nodes.size());
  for (NodeId v : nodes) keyed.push_back({naming.name_fixed(v, path_len), v});
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.node < b.node;
  });

  order_.resize(keyed.size());
  pos_.resize(keyed.size());
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    order_[i] = keyed[i].node;
    pos_[i] = {keyed[i].node, static_cast<std::uint32_t>(i)};
  }
  std::sort(pos_.begin(), pos_.end());

  adj_lce_.clear();
  if (order_.size() > 1) {
    adj_lce_.resize(order_.size() - 1);
    for (std::size_t i = 0; i + 1 < order_.size(); ++i) {
      if (keyed[i].name == keyed[i + 1].name) {
        adj_lce_[i] = path_len;  // identical paths
      } else {
        adj_lce_[i] = naming.fixed_path_lce(order_[i], order_[i + 1], path_len);
      }
    }
    rmq_.build(adj_lce_);
  }
}

std::uint32_t SortedPathList::position_of(NodeId v, QueryStats* stats) const {
  bump(stats, &QueryStats::rank_lookups);
  auto it = std::lower_bound(pos_.begin(), pos_.end(), std::make_pair(v, std::uint32_t(0)));
  if (it == pos_.end() || it->first != v)
    throw PreconditionError("node " + std::to_string(v) + " is not in the path list");
  return it->second;
}

std::int64_t SortedPathList::lce_between(std::uint32_t i, std::uint32_t j,
                                         QueryStats* stats) const {
  if (i == j) return path_len_;
  if (i > j) std::swap(i, j);
  return rmq_.min_value(i, j - 1, stats);
}

void NamingIndex::build(const LabeledTree& tree, const PrimitivesIndex& prim,
                        const NamingConfig& config) {
  tree_ = &tree;
  prim_ = &prim;
  const std::size_t n = static_cast<std::size_t>(tree.n);
  const std::int64_t maxd = tree.max_depth();

  rank_.clear();
  level_nodes_.clear();
  simple_lists_.clear();

  std::vector<std::uint32_t> cnt;
  std::vector<NodeId> tmp;

  // Downward rank tables by doubling: level k names length-2^k paths.
  const int K = maxd >= 1 ? floor_log2(maxd) + 1 : 0;
  std::uint32_t prev_bound = 0;
  for (int k = 0; k < K; ++k) {
    const std::int64_t len = std::int64_t(1) << k;
    std::vector<NodeId> nodes;
    for (std::size_t v = 0; v < n; ++v)
      if (tree.depth[v] >= len) nodes.push_back(static_cast<NodeId>(v));

    std::vector<std::uint32_t> hi(n, 0), lo(n, 0);
    std::uint32_t hi_bound, lo_bound;
    if (k == 0) {
      for (NodeId v : nodes) lo[v] = static_cast<std::uint32_t>(tree.label[v]);
      hi_bound = 1;
      lo_bound = 0;
      for (NodeId v : nodes) lo_bound = std::max(lo_bound, lo[v] + 1);
    } else {
      const auto& prev = rank_[static_cast<std::size_t>(k - 1)];
      for (NodeId v : nodes) {
        hi[v] = prev[prim.up(k - 1, v)];
        lo[v] = prev[v];
      }
      hi_bound = lo_bound = prev_bound;
    }
    counting_sort(nodes, tmp, lo, lo_bound, cnt);
    if (k > 0) counting_sort(nodes, tmp, hi, hi_bound, cnt);

    std::vector<std::uint32_t> rk(n, kNoPos);
    std::uint32_t r = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (i > 0 && (hi[nodes[i]] != hi[nodes[i - 1]] || lo[nodes[i]] != lo[nodes[i - 1]])) ++r;
      rk[nodes[i]] = r;
    }
    prev_bound = nodes.empty() ? 0 : r + 1;
    rank_.push_back(std::move(rk));
    level_nodes_.push_back(std::move(nodes));
  }

  // Upward suffix order by doubling on truncated upward strings; a missing
  // continuation sorts first, which makes shorter strings prefix-minimal.
  std::vector<std::vector<std::uint32_t>> uranks;
  {
    std::vector<NodeId> nodes(n);
    for (std::size_t v = 0; v < n; ++v) nodes[v] = static_cast<NodeId>(v);
    std::vector<std::uint32_t> key0(n, 0);
    for (std::size_t v = 0; v < n; ++v)
      if (tree.depth[v] >= 1) key0[v] = static_cast<std::uint32_t>(tree.label[v]) + 1;
    std::uint32_t bound0 = 1;
    for (std::size_t v = 0; v < n; ++v) bound0 = std::max(bound0, key0[v] + 1);
    counting_sort(nodes, tmp, key0, bound0, cnt);
    std::vector<std::uint32_t> ur(n, 0);
    std::uint32_t r = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && key0[nodes[i]] != key0[nodes[i - 1]]) ++r;
      ur[nodes[i]] = r;
    }
    std::uint32_t bound = r + 1;
    uranks.push_back(std::move(ur));

    for (int k = 1; (std::int64_t(1) << (k - 1)) < maxd; ++k) {
      const std::int64_t half = std::int64_t(1) << (k - 1);
      const auto& prev = uranks.back();
      std::vector<std::uint32_t> first(n), second(n, 0);
      for (std::size_t v = 0; v < n; ++v) {
        first[v] = prev[v];
        if (tree.depth[v] > half) second[v] = prev[prim.up(k - 1, static_cast<NodeId>(v))] + 1;
      }
      counting_sort(nodes, tmp, second, bound + 1, cnt);
      counting_sort(nodes, tmp, first, bound, cnt);
      std::vector<std::uint32_t> ur2(n);
      r = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && (first[nodes[i]] != first[nodes[i - 1]] ||
                      second[nodes[i]] != second[nodes[i - 1]]))
          ++r;
        ur2[nodes[i]] = r;
      }
      bound = r + 1;
      uranks.push_back(std::move(ur2));
    }
    suforder_ = std::move(nodes);  // stable sorts keep ties in ascending id order
  }
  sufpos_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) sufpos_[suforder_[i]] = static_cast<std::uint32_t>(i);

  // Adjacent LCPs via the rank tables: compare truncated strings level by
  // level, descending both nodes on equality.
  auto ulce_walk = [&](NodeId u, NodeId v) -> std::int64_t {
    if (u == v) return tree.depth[u];
    std::int64_t res = 0;
    for (int k = static_cast<int>(uranks.size()) - 1; k >= 0; --k) {
      if (uranks[static_cast<std::size_t>(k)][u] != uranks[static_cast<std::size_t>(k)][v])
        continue;
      std::int64_t span = std::int64_t(1) << k;
      std::int64_t t = std::min(tree.depth[u], span);
      if (t < span) return res + t;  // both strings fully consumed
      res += span;
      u = prim.up(k, u);
      v = prim.up(k, v);
      if (u == v) return res + tree.depth[u];
    }
    return res;
  };
  suflcp_.assign(n, 0);
  for (std::size_t i = 1; i < n; ++i) suflcp_[i] = ulce_walk(suforder_[i - 1], suforder_[i]);
  suflcp_rmq_.build(suflcp_);

  if (config.simple_pp_lists) {
    simple_lists_.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
      simple_lists_[static_cast<std::size_t>(k)].build(*this, level_nodes_[static_cast<std::size_t>(k)],
                                                       std::int64_t(1) << k);
  }
}

PathName NamingIndex::name_fixed(NodeId v, std::int64_t path_len, QueryStats* stats) const {
  tree_->require_node(v);
  if (path_len < 0 || path_len > tree_->depth[v])
    throw PreconditionError("path length " + std::to_string(path_len) + " exceeds depth of node " +
                            std::to_string(v));
  if (path_len == 0) return PathName{};
  bump(stats, &QueryStats::rank_lookups);
  const int k = floor_log2(path_len);
  const std::int64_t win = std::int64_t(1) << k;
  NodeId top_end =
      path_len == win ? v : prim_->level_ancestor(v, tree_->depth[v] - path_len + win);
  return PathName{rank(k, top_end), rank(k, v), path_len};
}

bool NamingIndex::paths_equal(NodeId u, NodeId v, std::int64_t path_len,
                              QueryStats* stats) const {
  tree_->require_node(u);
  tree_->require_node(v);
  if (path_len < 0 || path_len > tree_->depth[u] || path_len > tree_->depth[v])
    throw PreconditionError("path length out of range in paths_equal");
  if (path_len == 0 || u == v) return true;
  bump(stats, &QueryStats::rank_lookups);
  const int k = floor_log2(path_len);
  const std::int64_t win = std::int64_t(1) << k;
  if (rank(k, u) != rank(k, v)) return false;
  if (path_len == win) return true;
  NodeId tu = prim_->level_ancestor(u, tree_->depth[u] - path_len + win);
  NodeId tv = prim_->level_ancestor(v, tree_->depth[v] - path_len + win);
  return rank(k, tu) == rank(k, tv);
}

std::int64_t NamingIndex::upward_lce(NodeId u, NodeId v, QueryStats* stats) const {
  tree_->require_node(u);
  tree_->require_node(v);
  if (u == v) return tree_->depth[u];
  std::uint32_t a = sufpos_[u], b = sufpos_[v];
  if (a > b) std::swap(a, b);
  return suflcp_rmq_.min_value(a + 1, b, stats);
}

std::int64_t NamingIndex::fixed_path_lce(NodeId u, NodeId v, std::int64_t path_len,
                                         QueryStats* stats) const {
  if (path_len == 0 || u == v) return path_len;
  if (upward_lce(u, v, stats) >= path_len) return path_len;
  // Largest t with equal length-t prefixes; the predicate is monotone.
  std::int64_t lo = 0, hi = path_len - 1;
  const std::int64_t du = tree_->depth[u], dv = tree_->depth[v];
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo + 1) / 2;
    NodeId a = prim_->level_ancestor(u, du - path_len + mid);
    NodeId b = prim_->level_ancestor(v, dv - path_len + mid);
    if (paths_equal(a, b, mid, stats))
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

std::int64_t NamingIndex::simple_list_lce(int k, NodeId a, NodeId b, QueryStats* stats) const {
  const SortedPathList& list = simple_lists_[static_cast<std::size_t>(k)];
  return list.lce_between(list.position_of(a, stats), list.position_of(b, stats), stats);
}

LceResult NamingIndex::lce_pp_simple(NodeId v1, NodeId w1, NodeId v2, NodeId w2,
                                     QueryStats* stats) const {
  if (!tree_->is_ancestor(v1, w1) || !tree_->is_ancestor(v2, w2))
    throw PreconditionError("path endpoints violate ancestry");
  if (simple_lists_.empty() && rank_levels() > 0)
    throw PreconditionError("naming index built without the simple path-path lists");

  const std::int64_t len = std::min(tree_->depth[w1] - tree_->depth[v1],
                                    tree_->depth[w2] - tree_->depth[v2]);
  // Truncate the longer path, then resolve with at most two list queries.
  NodeId e1 = prim_->level_ancestor(w1, tree_->depth[v1] + len);
  NodeId e2 = prim_->level_ancestor(w2, tree_->depth[v2] + len);
  std::int64_t ans = 0;
  if (len > 0) {
    const int k = floor_log2(len);
    const std::int64_t win = std::int64_t(1) << k;
    if (win == len) {
      ans = simple_list_lce(k, e1, e2, stats);
    } else {
      NodeId p1 = prim_->level_ancestor(e1, tree_->depth[e1] - len + win);
      NodeId p2 = prim_->level_ancestor(e2, tree_->depth[e2] - len + win);
      std::int64_t g = simple_list_lce(k, p1, p2, stats);
      // Equal prefixes shift the answer into the suffix windows.
      ans = g < win ? g : (len - win) + simple_list_lce(k, e1, e2, stats);
    }
  }
  return LceResult{ans, prim_->level_ancestor(w1, tree_->depth[v1] + ans),
                   prim_->level_ancestor(w2, tree_->depth[v2] + ans)};
}

}  // namespace treelce
