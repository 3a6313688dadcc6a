#include "treelce/lce_pt.hpp"

#include <algorithm>
#include <cmath>

namespace treelce {

namespace {

// Smallest integer x with x^5 >= b^num5 (num5 = 2 or 4), i.e. ceil(b^{num5/5}).
std::int64_t ceil_power_fifth(std::int64_t b, int num5) {
  if (b <= 1) return b;
  long double est = std::pow(static_cast<long double>(b), static_cast<long double>(num5) / 5.0L);
  std::int64_t x = static_cast<std::int64_t>(est);
  auto ok = [&](std::int64_t cand) {
    if (cand <= 0) return false;
    unsigned __int128 lhs = 1;
    for (int i = 0; i < 5; ++i) lhs *= static_cast<unsigned __int128>(cand);
    unsigned __int128 rhs = 1;
    for (int i = 0; i < num5; ++i) rhs *= static_cast<unsigned __int128>(b);
    return lhs >= rhs;
  };
  while (!ok(x)) ++x;
  while (x > 1 && ok(x - 1)) --x;
  return x;
}

}  // namespace

void PtIndex::build_block_table(FlatMapPath& table, std::int64_t block) const {
  const LabeledTree& tree = *ctx_->tree;
  std::size_t count = 0;
  for (std::int64_t d : tree.depth) count += d >= block;
  table.reserve(count);
  for (NodeId v = 0; v < static_cast<NodeId>(tree.n); ++v) {
    if (tree.depth[v] < block) continue;
    NodeId start = ctx_->prim.kth_ancestor(v, block);
    PathName nm = ctx_->naming.name_fixed(v, block);
    table.insert(start, nm.hi, nm.lo, v);
  }
}

void PtIndex::build_level(Level& level) const {
  const LabeledTree& tree = *ctx_->tree;
  const PrimitivesIndex& prim = ctx_->prim;
  const NamingIndex& naming = ctx_->naming;
  const std::int64_t block = level.block;

  level.cover.build(tree, level.x);
  build_block_table(level.block_table, block);

  std::vector<NodeId> marked;
  for (NodeId v = 0; v < static_cast<NodeId>(tree.n); ++v)
    if (level.cover.is_marked(v) && tree.depth[v] >= block) marked.push_back(v);

  // Per marked node, the names of its length-`block` blocks at offsets
  // 0, block, 2*block, ... given dense ids under the block-name order.
  std::vector<std::uint32_t> bn_off(marked.size() + 1, 0);
  std::vector<PathName> names;
  for (std::size_t mi = 0; mi < marked.size(); ++mi) {
    NodeId v = marked[mi];
    std::int64_t iv = std::min<std::int64_t>(level.max_i, tree.depth[v] / block);
    bn_off[mi + 1] = bn_off[mi] + static_cast<std::uint32_t>(iv);
    for (std::int64_t t = 0; t < iv; ++t)
      names.push_back(naming.name_fixed(prim.kth_ancestor(v, t * block), block));
  }
  std::vector<PathName> uniq = names;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  std::vector<std::uint32_t> bn_ids(names.size());
  for (std::size_t i = 0; i < names.size(); ++i)
    bn_ids[i] = static_cast<std::uint32_t>(
        std::lower_bound(uniq.begin(), uniq.end(), names[i]) - uniq.begin());

  std::vector<std::uint32_t> midx(static_cast<std::size_t>(tree.n), kNoPos);
  for (std::size_t mi = 0; mi < marked.size(); ++mi) midx[marked[mi]] = static_cast<std::uint32_t>(mi);
  // Block id of the canonical path (v, i) at top-down position t.
  auto block_id = [&](NodeId v, std::uint32_t i, std::uint32_t t) {
    return bn_ids[bn_off[midx[v]] + (i - 1 - t)];
  };

  level.canon.clear();
  for (std::size_t mi = 0; mi < marked.size(); ++mi) {
    NodeId v = marked[mi];
    std::uint32_t iv = bn_off[mi + 1] - bn_off[mi];
    for (std::uint32_t i = 1; i <= iv; ++i) level.canon.push_back({v, i});
  }
  std::sort(level.canon.begin(), level.canon.end(),
            [&](const std::pair<NodeId, std::uint32_t>& a,
                const std::pair<NodeId, std::uint32_t>& b) {
              std::uint32_t common = std::min(a.second, b.second);
              for (std::uint32_t t = 0; t < common; ++t) {
                std::uint32_t ia = block_id(a.first, a.second, t);
                std::uint32_t ib = block_id(b.first, b.second, t);
                if (ia != ib) return ia < ib;
              }
              if (a.second != b.second) return a.second < b.second;  // prefix sorts first
              return a.first < b.first;
            });

  level.canon_pos.reserve(level.canon.size());
  for (std::size_t p = 0; p < level.canon.size(); ++p)
    level.canon_pos.insert((std::uint64_t(level.canon[p].first) << 32) | level.canon[p].second,
                           static_cast<std::uint32_t>(p));

  level.adj_blocks.clear();
  if (level.canon.size() > 1) {
    level.adj_blocks.resize(level.canon.size() - 1);
    for (std::size_t p = 0; p + 1 < level.canon.size(); ++p) {
      auto [va, ia] = level.canon[p];
      auto [vb, ib] = level.canon[p + 1];
      std::uint32_t common = std::min(ia, ib);
      std::uint32_t t = 0;
      while (t < common && block_id(va, ia, t) == block_id(vb, ib, t)) ++t;
      level.adj_blocks[p] = t;
    }
    level.rmq.build(level.adj_blocks);
  }

  // Canonical paths grouped by start node, positions ascending (the global
  // order restricted to one start node is still lexicographic).
  std::vector<std::pair<NodeId, std::uint32_t>> starts;
  starts.reserve(level.canon.size());
  for (std::size_t p = 0; p < level.canon.size(); ++p) {
    auto [v, i] = level.canon[p];
    starts.push_back({prim.kth_ancestor(v, std::int64_t(i) * block), static_cast<std::uint32_t>(p)});
  }
  std::sort(starts.begin(), starts.end());
  level.local_start.assign(static_cast<std::size_t>(tree.n) + 1, 0);
  for (auto& [s, p] : starts) ++level.local_start[s + 1];
  for (std::size_t v = 1; v <= static_cast<std::size_t>(tree.n); ++v)
    level.local_start[v] += level.local_start[v - 1];
  level.local_pos.resize(starts.size());
  for (std::size_t k = 0; k < starts.size(); ++k) level.local_pos[k] = starts[k].second;
}

void PtIndex::build(const TreeContext& ctx, const PtConfig& config) {
  ctx_ = &ctx;
  config_ = config;
  levels_.clear();
  contraction_.reset();

  const std::int64_t n = ctx.tree->n;
  if (config.mode == IndexMode::kCompact) {
    std::int64_t lg = 1;
    while ((std::int64_t(1) << lg) < n) ++lg;  // ceil(log2 n)
    std::int64_t lglg = 1;
    while ((std::int64_t(1) << lglg) < lg) ++lglg;
    contraction_ = std::make_unique<Contraction>();
    Contraction& c = *contraction_;
    c.bstar = std::max<std::int64_t>(n >= 2 ? lglg : 2, 2);
    c.block = c.bstar * c.bstar;
    c.cover.build(*ctx.tree, c.bstar);
    build_block_table(c.block_table, c.block);
    ContractedTree ct = build_contracted_tree(ctx, c.cover, c.block);
    c.ctree = std::move(ct.ctree);
    c.to_contracted = std::move(ct.to_contracted);
    c.from_contracted = std::move(ct.from_contracted);
    c.cctx.build(c.ctree);
    c.inner = std::make_unique<PtIndex>();
    c.inner->build(c.cctx, PtConfig{IndexMode::kSimple, config.b0});
    base_block_ = c.bstar;
    base_bound_ = c.block;
    build_block_table(base_table_, base_block_);
    return;
  }

  std::int64_t b = n;
  std::int64_t capacity = n;
  bool first = true;
  while (first || b > config.b0) {
    first = false;
    Level level;
    level.b = b;
    level.capacity = capacity;
    level.x = std::max<std::int64_t>(ceil_power_fifth(b, 2), 2);
    level.block = level.x * level.x;
    level.max_i = (capacity + level.block - 1) / level.block;
    level.active = level.block < capacity;
    if (level.active) {
      build_level(level);
      capacity = level.block;
    }
    levels_.push_back(std::move(level));

    std::int64_t next = std::max(ceil_power_fifth(b, 4), config.b0);
    if (next >= b) next = b - 1;
    b = next;
  }
  base_bound_ = capacity;
  base_block_ = std::min<std::int64_t>(8, std::max<std::int64_t>(2, capacity));
  build_block_table(base_table_, base_block_);
}

const LabeledTree* PtIndex::contracted_tree() const {
  return contraction_ ? &contraction_->ctree : nullptr;
}

PtReduceOutcome PtIndex::reduce_level(std::size_t level_idx, const PtQuery& q,
                                      QueryStats* stats) const {
  bump(stats, &QueryStats::level_invocations);
  const Level& level = levels_[level_idx];
  if (!level.active || q.len <= level.block || q.len > level.capacity)
    return PtReduceOutcome{0, q};

  const PrimitivesIndex& prim = ctx_->prim;
  const NamingIndex& naming = ctx_->naming;
  const std::int64_t block = level.block;
  const std::int64_t du = prim.depth(q.path_end);

  // Block check: does the subtree continue along the first `block` symbols?
  NodeId z0 = prim.level_ancestor(q.path_end, du - q.len + block);
  PathName nm = naming.name_fixed(z0, block, stats);
  bump(stats, &QueryStats::hash_lookups);
  NodeId w = level.block_table.find(q.root, nm.hi, nm.lo);
  if (w == kNoNode) return PtReduceOutcome{0, PtQuery{z0, block, q.root}};

  std::int64_t len = q.len - block;
  NodeId root = w;
  std::int64_t matched = block;
  if (len == 0) return PtReduceOutcome{matched, PtQuery{q.path_end, 0, root}};

  // Slide both sides up to marked nodes; the d re-read symbols were already
  // matched inside the block just consumed.
  const std::int64_t d = level.cover.find_d(z0, root);
  len += d;
  root = prim.kth_ancestor(root, d);
  matched -= d;

  const std::int64_t i = len / block;
  if (i == 0) return PtReduceOutcome{matched, PtQuery{q.path_end, len, root}};

  // The canonical prefix of i blocks is in the global list; its neighbours
  // among the canonical paths starting at `root` bound the answer to one
  // block beyond the best shared prefix.
  NodeId e = prim.level_ancestor(q.path_end, du - len + i * block);
  bump(stats, &QueryStats::hash_lookups);
  std::uint32_t pos = level.canon_pos.find((std::uint64_t(e) << 32) | static_cast<std::uint32_t>(i));

  bump(stats, &QueryStats::predecessor_calls);
  const std::uint32_t lo = level.local_start[root], hi = level.local_start[root + 1];
  auto begin = level.local_pos.begin() + lo, end = level.local_pos.begin() + hi;
  auto it = std::lower_bound(begin, end, pos);
  std::int64_t pblocks = 0;
  std::uint32_t best = kNoPos;
  auto offer = [&](std::uint32_t cand) {
    std::int64_t lb;
    if (cand == pos) {
      lb = i;
    } else {
      std::uint32_t a = std::min(cand, pos), b2 = std::max(cand, pos);
      lb = level.rmq.min_value(a, b2 - 1, stats);
    }
    if (lb > pblocks || (lb == pblocks && best == kNoPos)) {
      pblocks = lb;
      best = cand;
    }
  };
  if (it != end) offer(*it);
  if (it != begin) offer(*(it - 1));

  const std::int64_t p = pblocks * block;
  NodeId down_root = root;
  if (pblocks > 0) {
    auto [bv, bi] = level.canon[best];
    down_root = prim.kth_ancestor(bv, std::int64_t(bi) * block - p);
  }
  if (p >= len) return PtReduceOutcome{matched + len, PtQuery{q.path_end, 0, down_root}};
  const std::int64_t rem = std::min(len, p + block) - p;
  NodeId u2 = prim.level_ancestor(q.path_end, du - len + p + rem);
  return PtReduceOutcome{matched + p, PtQuery{u2, rem, down_root}};
}

std::pair<std::int64_t, NodeId> PtIndex::base_walk(const PtQuery& q, QueryStats* stats) const {
  const PrimitivesIndex& prim = ctx_->prim;
  const NamingIndex& naming = ctx_->naming;
  const LabeledTree& tree = *ctx_->tree;
  std::int64_t rem = q.len;
  std::int64_t matched = 0;
  NodeId cur = q.root;
  const std::int64_t du = q.len > 0 ? prim.depth(q.path_end) : 0;

  while (rem >= base_block_) {
    NodeId z = prim.level_ancestor(q.path_end, du - rem + base_block_);
    PathName nm = naming.name_fixed(z, base_block_, stats);
    bump(stats, &QueryStats::hash_lookups);
    NodeId w = base_table_.find(cur, nm.hi, nm.lo);
    if (w == kNoNode) break;
    matched += base_block_;
    rem -= base_block_;
    cur = w;
  }
  while (rem > 0) {
    Symbol sym = tree.label[prim.level_ancestor(q.path_end, du - rem + 1)];
    bump(stats, &QueryStats::symbol_comparisons);
    NodeId next = prim.child_by_label(cur, sym, stats);
    if (next == kNoNode) break;
    ++matched;
    --rem;
    cur = next;
  }
  return {matched, cur};
}

std::pair<std::int64_t, NodeId> PtIndex::run_simple(const PtQuery& q0, QueryStats* stats) const {
  PtQuery q = q0;
  std::int64_t total = 0;
  for (std::size_t i = 0; i < levels_.size() && q.len > 0; ++i) {
    PtReduceOutcome out = reduce_level(i, q, stats);
    total += out.consumed;
    q = out.residual;
  }
  if (q.len == 0) return {total, q.root};
  auto [walked, end] = base_walk(q, stats);
  return {total + walked, end};
}

std::pair<std::int64_t, NodeId> PtIndex::run_compact(const PtQuery& q, QueryStats* stats) const {
  const Contraction& c = *contraction_;
  const PrimitivesIndex& prim = ctx_->prim;
  const NamingIndex& naming = ctx_->naming;
  const std::int64_t block = c.block;
  if (q.len <= block) return base_walk(q, stats);

  const std::int64_t du = prim.depth(q.path_end);
  NodeId z0 = prim.level_ancestor(q.path_end, du - q.len + block);
  PathName nm = naming.name_fixed(z0, block, stats);
  bump(stats, &QueryStats::hash_lookups);
  NodeId w = c.block_table.find(q.root, nm.hi, nm.lo);
  if (w == kNoNode) {
    auto [walked, end] = base_walk(PtQuery{z0, block, q.root}, stats);
    return {walked, end};
  }

  std::int64_t len = q.len - block;
  NodeId root = w;
  std::int64_t matched = block;
  if (len == 0) return {matched, root};

  const std::int64_t d = c.cover.find_d(z0, root);
  len += d;
  root = prim.kth_ancestor(root, d);
  matched -= d;

  const std::int64_t blocks = len / block;
  if (blocks == 0) {
    auto [walked, end] = base_walk(PtQuery{q.path_end, len, root}, stats);
    return {matched + walked, end};
  }

  // Map the aligned query onto the contracted tree: whole blocks resolve
  // there, the final partial window walks in the original tree.
  NodeId top = prim.level_ancestor(q.path_end, du - len);
  NodeId be = prim.level_ancestor(q.path_end, du - len + blocks * block);
  LcePtResult inner = c.inner->query(c.to_contracted[top], c.to_contracted[be],
                                     c.to_contracted[root], stats);
  const std::int64_t g = inner.length;
  NodeId y = g == 0 ? root : c.from_contracted[inner.tree_end];
  matched += g * block;
  if (g == blocks) {
    const std::int64_t rem = len - blocks * block;
    auto [walked, end] = base_walk(PtQuery{q.path_end, rem, y}, stats);
    return {matched + walked, end};
  }
  NodeId u2 = prim.level_ancestor(q.path_end, du - len + (g + 1) * block);
  auto [walked, end] = base_walk(PtQuery{u2, block, y}, stats);
  return {matched + walked, end};
}

LcePtResult PtIndex::query(NodeId v1, NodeId w1, NodeId v2, QueryStats* stats) const {
  const LabeledTree& tree = *ctx_->tree;
  if (!tree.is_ancestor(v1, w1)) throw PreconditionError("path endpoints violate ancestry");
  tree.require_node(v2);
  PtQuery q{w1, tree.depth[w1] - tree.depth[v1], v2};
  auto [len, end] = config_.mode == IndexMode::kSimple ? run_simple(q, stats)
                                                       : run_compact(q, stats);
  return LcePtResult{len, ctx_->prim.level_ancestor(w1, tree.depth[v1] + len), end};
}

}  // namespace treelce
