#include "treelce/primitives.hpp"

#include <algorithm>
#include <bit>

namespace treelce {

void RmqIndex::build(std::vector<std::int64_t> values) {
  values_ = std::move(values);
  sparse_.clear();
  const std::size_t n = values_.size();
  if (n == 0) return;
  const std::size_t nb = (n + (1u << kBlockBits) - 1) >> kBlockBits;
  std::vector<std::uint32_t> base(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    std::uint32_t lo = static_cast<std::uint32_t>(b << kBlockBits);
    std::uint32_t hi = static_cast<std::uint32_t>(std::min(n - 1, (b << kBlockBits) + (1u << kBlockBits) - 1));
    base[b] = scan(lo, hi);
  }
  sparse_.push_back(std::move(base));
  for (std::size_t len = 2; len <= nb; len <<= 1) {
    const auto& prev = sparse_.back();
    std::vector<std::uint32_t> cur(nb - len + 1);
    for (std::size_t i = 0; i + len <= nb; ++i) cur[i] = pick(prev[i], prev[i + len / 2]);
    sparse_.push_back(std::move(cur));
  }
}

std::uint32_t RmqIndex::scan(std::uint32_t i, std::uint32_t j) const {
  std::uint32_t best = i;
  for (std::uint32_t k = i + 1; k <= j; ++k)
    if (values_[k] < values_[best]) best = k;
  return best;
}

std::uint32_t RmqIndex::min_pos(std::uint32_t i, std::uint32_t j, QueryStats* stats) const {
  if (i > j || j >= values_.size()) throw PreconditionError("rmq range out of bounds");
  bump(stats, &QueryStats::rmq_calls);
  const std::uint32_t bi = i >> kBlockBits, bj = j >> kBlockBits;
  if (bi == bj) return scan(i, j);
  std::uint32_t best = scan(i, ((bi + 1) << kBlockBits) - 1);
  if (bi + 1 <= bj - 1) {
    std::uint32_t lo = bi + 1, hi = bj - 1;
    int k = std::bit_width(hi - lo + 1) - 1;
    std::uint32_t cand = pick(sparse_[static_cast<std::size_t>(k)][lo],
                              sparse_[static_cast<std::size_t>(k)][hi - (1u << k) + 1]);
    best = pick(best, cand);
  }
  best = pick(best, scan(bj << kBlockBits, j));
  return best;
}

std::int64_t RmqIndex::min_value(std::uint32_t i, std::uint32_t j, QueryStats* stats) const {
  return values_[min_pos(i, j, stats)];
}

void PredIndex::build(std::vector<std::uint64_t> keys, Kind kind) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  keys_ = std::move(keys);
  kind_ = kind;
  bucket_start_.clear();
  if (kind_ != Kind::kBucketed || keys_.empty()) return;

  // Directory with ~2n buckets over the key range.
  std::uint64_t maxkey = keys_.back();
  int keybits = maxkey == 0 ? 1 : std::bit_width(maxkey);
  int dirbits = std::bit_width(2 * keys_.size());
  shift_ = static_cast<std::uint32_t>(std::max(0, keybits - dirbits));
  std::size_t nbuckets = (maxkey >> shift_) + 1;
  bucket_start_.assign(nbuckets + 1, 0);
  std::size_t ki = 0;
  for (std::size_t b = 0; b < nbuckets; ++b) {
    bucket_start_[b] = static_cast<std::uint32_t>(ki);
    while (ki < keys_.size() && (keys_[ki] >> shift_) == b) ++ki;
  }
  bucket_start_[nbuckets] = static_cast<std::uint32_t>(keys_.size());
}

std::optional<std::uint64_t> PredIndex::predecessor(std::uint64_t x, QueryStats* stats) const {
  bump(stats, &QueryStats::predecessor_calls);
  if (keys_.empty() || x < keys_.front()) return std::nullopt;
  if (kind_ == Kind::kBucketed && !bucket_start_.empty()) {
    std::uint64_t b = x >> shift_;
    if (b >= bucket_start_.size() - 1) return keys_.back();
    std::uint32_t lo = bucket_start_[b], hi = bucket_start_[b + 1];
    if (lo < hi && keys_[lo] <= x) {
      auto it = std::upper_bound(keys_.begin() + lo, keys_.begin() + hi, x);
      return *(it - 1);
    }
    // x precedes everything in its bucket; answer is the last earlier key.
    return lo > 0 ? std::optional<std::uint64_t>(keys_[lo - 1]) : std::nullopt;
  }
  auto it = std::upper_bound(keys_.begin(), keys_.end(), x);
  return *(it - 1);
}

void PrimitivesIndex::build(const LabeledTree& tree) {
  tree_ = &tree;
  const std::size_t n = static_cast<std::size_t>(tree.n);

  std::int64_t maxd = tree.max_depth();
  int levels = 1;
  while ((std::int64_t(1) << levels) <= maxd) ++levels;
  if (maxd == 0) levels = 0;
  up_.assign(static_cast<std::size_t>(levels), std::vector<NodeId>(n, kNoNode));
  if (levels > 0) {
    for (std::size_t v = 0; v < n; ++v) up_[0][v] = tree.parent[v];
    for (int k = 1; k < levels; ++k)
      for (std::size_t v = 0; v < n; ++v) {
        NodeId mid = up_[static_cast<std::size_t>(k - 1)][v];
        up_[static_cast<std::size_t>(k)][v] =
            mid == kNoNode ? kNoNode : up_[static_cast<std::size_t>(k - 1)][mid];
      }
  }

  euler_nodes_.clear();
  euler_nodes_.reserve(2 * n);
  first_occ_.assign(n, 0);
  std::vector<std::pair<NodeId, std::size_t>> stack;
  stack.push_back({0, 0});
  first_occ_[0] = 0;
  euler_nodes_.push_back(0);
  while (!stack.empty()) {
    auto& [v, ci] = stack.back();
    if (ci == tree.children[v].size()) {
      stack.pop_back();
      if (!stack.empty()) euler_nodes_.push_back(stack.back().first);
      continue;
    }
    NodeId c = tree.children[v][ci++].second;
    first_occ_[c] = static_cast<std::uint32_t>(euler_nodes_.size());
    euler_nodes_.push_back(c);
    stack.push_back({c, 0});
  }
  std::vector<std::int64_t> tour_depth(euler_nodes_.size());
  for (std::size_t i = 0; i < euler_nodes_.size(); ++i) tour_depth[i] = tree.depth[euler_nodes_[i]];
  euler_rmq_.build(std::move(tour_depth));

  child_map_.reserve(n);
  for (std::size_t v = 0; v < n; ++v)
    for (auto [sym, c] : tree.children[v])
      child_map_.insert((std::uint64_t(v) << 32) | std::uint32_t(sym), c);
}

NodeId PrimitivesIndex::level_ancestor(NodeId v, std::int64_t d, QueryStats*) const {
  tree_->require_node(v);
  if (d < 0 || d > tree_->depth[v])
    throw PreconditionError("level ancestor depth " + std::to_string(d) + " out of range");
  std::int64_t k = tree_->depth[v] - d;
  int bit = 0;
  while (k > 0) {
    if (k & 1) v = up_[static_cast<std::size_t>(bit)][v];
    k >>= 1;
    ++bit;
  }
  return v;
}

NodeId PrimitivesIndex::nca(NodeId u, NodeId v, QueryStats* stats) const {
  tree_->require_node(u);
  tree_->require_node(v);
  std::uint32_t a = first_occ_[u], b = first_occ_[v];
  if (a > b) std::swap(a, b);
  return euler_nodes_[euler_rmq_.min_pos(a, b, stats)];
}

NodeId PrimitivesIndex::child_by_label(NodeId v, Symbol s, QueryStats* stats) const {
  tree_->require_node(v);
  bump(stats, &QueryStats::hash_lookups);
  if (s < 0) return kNoNode;
  std::uint32_t r = child_map_.find((std::uint64_t(v) << 32) | std::uint32_t(s));
  return r == kNoPos ? kNoNode : static_cast<NodeId>(r);
}

}  // namespace treelce
