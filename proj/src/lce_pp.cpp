#include "treelce/lce_pp.hpp"

#include <algorithm>
#include <cmath>

namespace treelce {

namespace {

int ceil_log2(std::int64_t x) {
  int k = 0;
  while ((std::int64_t(1) << k) < x) ++k;
  return k;
}

}  // namespace

ContractedTree build_contracted_tree(const TreeContext& ctx, const DiffCover& cover,
                                     std::int64_t block) {
  const LabeledTree& tree = *ctx.tree;
  const std::size_t n = static_cast<std::size_t>(tree.n);

  ContractedTree out;
  out.to_contracted.assign(n, kNoNode);
  std::vector<NodeId> marked;
  for (std::size_t v = 0; v < n; ++v)
    if (cover.is_marked(static_cast<NodeId>(v))) {
      out.to_contracted[v] = static_cast<NodeId>(marked.size() + 1);
      marked.push_back(static_cast<NodeId>(v));
    }

  // Dense symbols for the distinct block names; shallow marked nodes hang off
  // the artificial root with fresh symbols of their own, so no two siblings
  // ever share a label and the contracted tree is normalized by construction.
  std::vector<PathName> names;
  names.reserve(marked.size());
  for (NodeId u : marked)
    if (tree.depth[u] >= block) names.push_back(ctx.naming.name_fixed(u, block));
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  LabeledTree& ct = out.ctree;
  ct.n = static_cast<std::int64_t>(marked.size()) + 1;
  ct.parent.assign(static_cast<std::size_t>(ct.n), kNoNode);
  ct.label.assign(static_cast<std::size_t>(ct.n), kNoSymbol);
  out.from_contracted.assign(static_cast<std::size_t>(ct.n), kNoNode);
  Symbol fresh = static_cast<Symbol>(names.size());
  for (std::size_t i = 0; i < marked.size(); ++i) {
    NodeId u = marked[i];
    NodeId cid = static_cast<NodeId>(i + 1);
    out.from_contracted[cid] = u;
    if (tree.depth[u] >= block) {
      NodeId up = ctx.prim.kth_ancestor(u, block);
      ct.parent[cid] = out.to_contracted[up];
      PathName nm = ctx.naming.name_fixed(u, block);
      ct.label[cid] = static_cast<Symbol>(
          std::lower_bound(names.begin(), names.end(), nm) - names.begin());
    } else {
      ct.parent[cid] = 0;
      ct.label[cid] = fresh++;
    }
  }
  ct.finalize();
  if (ct.has_duplicate_sibling_labels())
    throw std::logic_error("contracted tree has duplicate sibling labels");
  return out;
}

void PpIndex::build_levels(std::int64_t top_b) {
  const LabeledTree& tree = *ctx_->tree;
  std::int64_t b = top_b;
  bool first = true;
  while (first || b > config_.b0) {
    first = false;
    Level level;
    level.b = b;
    level.x = std::max<std::int64_t>(ceil_log2(b), 2);
    const std::int64_t xx = level.x * level.x;
    level.active = xx < b;
    if (level.active) {
      level.cover.build(tree, level.x);
      std::vector<NodeId> marked;
      for (NodeId v = 0; v < static_cast<NodeId>(tree.n); ++v)
        if (level.cover.is_marked(v)) marked.push_back(v);
      for (std::int64_t len = xx; len <= b; len <<= 1) {
        std::vector<NodeId> eligible;
        for (NodeId v : marked)
          if (tree.depth[v] >= len) eligible.push_back(v);
        level.lists.emplace_back();
        level.lists.back().build(ctx_->naming, std::move(eligible), len);
      }
    }
    levels_.push_back(std::move(level));

    std::int64_t cl = ceil_log2(b);
    std::int64_t next = std::max(cl * cl, config_.b0);
    if (next >= b) next = b - 1;
    b = next;
  }

  // Worst residual length reaching the base walk, mirroring the per-level
  // capacity rule used by reduce_level.
  base_bound_ = top_b;
  for (const Level& level : levels_)
    if (level.active && base_bound_ <= level.b)
      base_bound_ = std::min(base_bound_, level.x * level.x);
}

void PpIndex::build(const TreeContext& ctx, const PpConfig& config) {
  ctx_ = &ctx;
  config_ = config;
  levels_.clear();
  contraction_.reset();
  base_block_ = 4;

  if (config.mode == IndexMode::kSimple) {
    build_levels(ctx.tree->n);
    return;
  }

  // Compact mode: difference cover with parameter log* n, reduction levels
  // on the contracted block tree, block-granular mapping at query time.
  std::int64_t logstar = 0;
  for (double z = static_cast<double>(ctx.tree->n); z > 1.0; ++logstar)
    z = std::log2(z);
  contraction_ = std::make_unique<Contraction>();
  Contraction& c = *contraction_;
  c.bstar = std::max<std::int64_t>(logstar, 2);
  c.block = c.bstar * c.bstar;
  c.cover.build(*ctx.tree, c.bstar);
  ContractedTree ct = build_contracted_tree(ctx, c.cover, c.block);
  c.ctree = std::move(ct.ctree);
  c.to_contracted = std::move(ct.to_contracted);
  c.cctx.build(c.ctree);
  c.inner = std::make_unique<PpIndex>();
  c.inner->build(c.cctx, PpConfig{IndexMode::kSimple, config.b0});
  base_block_ = c.bstar;
  base_bound_ = c.block;
}

const LabeledTree* PpIndex::contracted_tree() const {
  return contraction_ ? &contraction_->ctree : nullptr;
}

const PpIndex* PpIndex::inner_index() const {
  return contraction_ ? contraction_->inner.get() : nullptr;
}

PpReduceOutcome PpIndex::reduce_level(std::size_t level_idx, const PpQuery& q,
                                      QueryStats* stats) const {
  bump(stats, &QueryStats::level_invocations);
  const Level& level = levels_[level_idx];
  const PrimitivesIndex& prim = ctx_->prim;
  const NamingIndex& naming = ctx_->naming;
  const std::int64_t xx = level.x * level.x;

  // Over-capacity queries pass through: integer rounding lets a residual of
  // x^2 from one level slightly exceed a later, smaller level parameter.
  if (!level.active || q.len <= xx || q.len > level.b)
    return PpReduceOutcome{std::nullopt, 0, q};

  const std::int64_t d1 = prim.depth(q.end1), d2 = prim.depth(q.end2);
  NodeId p1 = prim.level_ancestor(q.end1, d1 - q.len + xx);
  NodeId p2 = prim.level_ancestor(q.end2, d2 - q.len + xx);
  if (!naming.paths_equal(p1, p2, xx, stats))
    return PpReduceOutcome{std::nullopt, 0, PpQuery{p1, p2, xx}};
  if (q.len <= 2 * xx)
    return PpReduceOutcome{std::nullopt, xx, PpQuery{q.end1, q.end2, q.len - xx}};

  // Two windows of length x^2 * 2^k cover the suffix beyond the matched
  // prefix; resolve inside the earlier-starting window first.
  int k = 0;
  while ((xx << (k + 1)) <= q.len - xx) ++k;
  const std::int64_t m = xx << k;

  NodeId c1, c2;
  std::int64_t window_start;
  NodeId a1 = prim.level_ancestor(q.end1, d1 - q.len + xx + m);
  NodeId a2 = prim.level_ancestor(q.end2, d2 - q.len + xx + m);
  if (!naming.paths_equal(a1, a2, m, stats)) {
    c1 = a1;
    c2 = a2;
    window_start = xx;
  } else if (!naming.paths_equal(q.end1, q.end2, m, stats)) {
    c1 = q.end1;
    c2 = q.end2;
    window_start = q.len - m;
  } else {
    return PpReduceOutcome{q.len, 0, PpQuery{}};  // prefix and both windows match
  }

  const std::int64_t d = level.cover.find_d(c1, c2);
  NodeId s1 = prim.kth_ancestor(c1, d);
  NodeId s2 = prim.kth_ancestor(c2, d);
  const SortedPathList& list = level.lists[static_cast<std::size_t>(k)];
  std::int64_t g = list.lce_between(list.position_of(s1, stats), list.position_of(s2, stats),
                                    stats);
  if (g >= m) {
    // The slid windows agree fully, so only the last d symbols are open.
    return PpReduceOutcome{std::nullopt, window_start + m - d, PpQuery{c1, c2, d}};
  }
  // The slide re-reads d already-matched symbols, hence the offset.
  return PpReduceOutcome{window_start + (g - d), 0, PpQuery{}};
}

std::int64_t PpIndex::base_walk(const PpQuery& q, QueryStats* stats) const {
  const PrimitivesIndex& prim = ctx_->prim;
  const NamingIndex& naming = ctx_->naming;
  const LabeledTree& tree = *ctx_->tree;
  const std::int64_t d1 = prim.depth(q.end1), d2 = prim.depth(q.end2);
  std::int64_t remaining = q.len;
  std::int64_t matched = 0;

  while (remaining >= base_block_) {
    NodeId a1 = prim.level_ancestor(q.end1, d1 - remaining + base_block_);
    NodeId a2 = prim.level_ancestor(q.end2, d2 - remaining + base_block_);
    if (!naming.paths_equal(a1, a2, base_block_, stats)) break;
    matched += base_block_;
    remaining -= base_block_;
  }
  while (remaining > 0) {
    Symbol sa = tree.label[prim.level_ancestor(q.end1, d1 - remaining + 1)];
    Symbol sb = tree.label[prim.level_ancestor(q.end2, d2 - remaining + 1)];
    bump(stats, &QueryStats::symbol_comparisons);
    if (sa != sb) break;
    ++matched;
    --remaining;
  }
  return matched;
}

std::int64_t PpIndex::query_len(const PpQuery& q0, QueryStats* stats) const {
  PpQuery q = q0;
  std::int64_t total = 0;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    PpReduceOutcome out = reduce_level(i, q, stats);
    if (out.answer) return total + *out.answer;
    total += out.consumed;
    q = out.residual;
    if (q.len == 0) return total;
  }
  return total + base_walk(q, stats);
}

std::int64_t PpIndex::query_len_compact(const PpQuery& q, QueryStats* stats) const {
  const Contraction& c = *contraction_;
  const PrimitivesIndex& prim = ctx_->prim;
  const NamingIndex& naming = ctx_->naming;
  const std::int64_t block = c.block;
  if (q.len <= block) return base_walk(q, stats);

  const std::int64_t d1 = prim.depth(q.end1), d2 = prim.depth(q.end2);
  NodeId p1 = prim.level_ancestor(q.end1, d1 - q.len + block);
  NodeId p2 = prim.level_ancestor(q.end2, d2 - q.len + block);
  if (!naming.paths_equal(p1, p2, block, stats))
    return base_walk(PpQuery{p1, p2, block}, stats);

  const std::int64_t d = c.cover.find_d(q.end1, q.end2);
  NodeId u1 = prim.kth_ancestor(q.end1, d);
  NodeId u2 = prim.kth_ancestor(q.end2, d);
  const std::int64_t prefix_len = q.len - d;
  const std::int64_t blocks = prefix_len / block;
  std::int64_t g = 0;
  if (blocks > 0) {
    NodeId cu = c.to_contracted[u1], cv = c.to_contracted[u2];
    NodeId ct1 = c.cctx.prim.level_ancestor(cu, c.ctree.depth[cu] - blocks);
    NodeId ct2 = c.cctx.prim.level_ancestor(cv, c.ctree.depth[cv] - blocks);
    g = c.inner->query(ct1, cu, ct2, cv, stats).length;
  }
  const std::int64_t lead = prefix_len - blocks * block;  // within the matched prefix
  if (g == blocks) {
    std::int64_t total = prefix_len;
    if (d > 0) total += base_walk(PpQuery{q.end1, q.end2, d}, stats);
    return total;
  }
  const std::int64_t start = lead + g * block;
  NodeId w1 = prim.level_ancestor(q.end1, d1 - q.len + start + block);
  NodeId w2 = prim.level_ancestor(q.end2, d2 - q.len + start + block);
  return start + base_walk(PpQuery{w1, w2, block}, stats);
}

LceResult PpIndex::query(NodeId v1, NodeId w1, NodeId v2, NodeId w2, QueryStats* stats) const {
  const LabeledTree& tree = *ctx_->tree;
  if (!tree.is_ancestor(v1, w1) || !tree.is_ancestor(v2, w2))
    throw PreconditionError("path endpoints violate ancestry");
  const PrimitivesIndex& prim = ctx_->prim;
  const std::int64_t len =
      std::min(tree.depth[w1] - tree.depth[v1], tree.depth[w2] - tree.depth[v2]);
  PpQuery q{prim.level_ancestor(w1, tree.depth[v1] + len),
            prim.level_ancestor(w2, tree.depth[v2] + len), len};
  std::int64_t ans = config_.mode == IndexMode::kSimple ? query_len(q, stats)
                                                        : query_len_compact(q, stats);
  return LceResult{ans, prim.level_ancestor(w1, tree.depth[v1] + ans),
                   prim.level_ancestor(w2, tree.depth[v2] + ans)};
}

}  // namespace treelce
