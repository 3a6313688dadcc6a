#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "testutil.hpp"

using namespace treelce;
using namespace treelce::test;

namespace {

std::int64_t ceil45(std::int64_t b) {
  if (b <= 1) return b;
  std::int64_t y = static_cast<std::int64_t>(std::pow(static_cast<long double>(b), 0.8L));
  auto ok = [&](std::int64_t cand) {
    if (cand <= 0) return false;
    unsigned __int128 lhs = 1, rhs = 1;
    for (int i = 0; i < 5; ++i) lhs *= static_cast<unsigned __int128>(cand);
    for (int i = 0; i < 4; ++i) rhs *= static_cast<unsigned __int128>(b);
    return lhs >= rhs;
  };
  while (!ok(y)) ++y;
  while (y > 1 && ok(y - 1)) --y;
  return y;
}

std::vector<std::int64_t> expected_pt_params(std::int64_t n, std::int64_t b0) {
  std::vector<std::int64_t> out;
  std::int64_t b = n;
  bool first = true;
  while (first || b > b0) {
    first = false;
    out.push_back(b);
    std::int64_t next = std::max(ceil45(b), b0);
    if (next >= b) next = b - 1;
    b = next;
  }
  return out;
}

void check_pt(const PtIndex& idx, const LabeledTree& tree, NodeId v1, NodeId w1, NodeId v2) {
  LcePtResult got = idx.query(v1, w1, v2);
  LcePtResult want = oracle::lce_pt(tree, v1, w1, v2);
  CHECK(got.length == want.length);
  CHECK(got.path_end == want.path_end);
  CHECK(got.tree_end == want.tree_end);
}

}  // namespace

TEST_CASE("pt level parameter chain") {
  Fixture fx(gen_random_tree({100000, 2, TreeShape::kRandom, 3}));
  PtIndex pt;
  pt.build(fx.ctx);
  std::vector<std::int64_t> expect = expected_pt_params(100000, 64);
  REQUIRE(pt.levels().size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(pt.levels()[i].b == expect[i]);
  CHECK(expect[0] == 100000);
  CHECK(expect[1] == 10000);  // ceil(100000^{4/5})
  CHECK(expect[2] == 1585);   // ceil(10000^{4/5})
  for (std::size_t i = 1; i < expect.size(); ++i) CHECK(expect[i] < expect[i - 1]);
}

TEST_CASE("two-node tree answers through the base walk") {
  Fixture fx(gen_random_tree({2, 1, TreeShape::kPath, 0}));
  PtIndex pt;
  pt.build(fx.ctx);
  CHECK(pt.query(0, 1, 0).length == 1);
  CHECK(pt.query(1, 1, 0).length == 0);
}

TEST_CASE("canonical path count stays within the bound") {
  Fixture fx(gen_random_tree({30000, 2, TreeShape::kPath, 7}));
  PtIndex pt;
  pt.build(fx.ctx);
  for (const auto& level : pt.levels()) {
    if (!level.active) continue;
    CHECK(static_cast<std::int64_t>(level.canon.size()) <=
          level.cover.marked_count() * level.max_i);
  }
}

TEST_CASE("reduce_level outcomes recombine with the oracle") {
  std::mt19937_64 rng(101);
  Fixture fx(gen_random_tree({5000, 2, TreeShape::kPath, 23}));
  PtIndex pt;
  pt.build(fx.ctx);
  REQUIRE(!pt.levels().empty());
  REQUIRE(pt.levels()[0].active);

  for (int q = 0; q < 8000; ++q) {
    auto [v1, w1] = random_path(fx.tree, rng);
    NodeId v2 = random_node(fx.tree, rng);
    PtQuery query{w1, fx.tree.depth[w1] - fx.tree.depth[v1], v2};
    std::int64_t want = oracle::lce_pt(fx.tree, v1, w1, v2).length;
    PtReduceOutcome out = pt.reduce_level(0, query, nullptr);
    std::int64_t naive = 0;
    if (out.residual.len > 0) {
      NodeId top = fx.ctx.prim.kth_ancestor(out.residual.path_end, out.residual.len);
      naive = oracle::lce_pt(fx.tree, top, out.residual.path_end, out.residual.root).length;
    }
    CHECK(out.consumed + naive == want);
    CHECK(out.residual.len <= pt.levels()[0].block);
  }

  // A missing block lookup leaves the block-length prefix as the residual.
  NodeId leaf = 0;
  for (NodeId v = 0; v < static_cast<NodeId>(fx.tree.n); ++v)
    if (fx.tree.children[v].empty()) leaf = v;
  const std::int64_t block = pt.levels()[0].block;
  if (fx.tree.depth[leaf] > block) {
    PtQuery query{fx.tree.n > 1 ? static_cast<NodeId>(fx.tree.n - 1) : 0,
                  fx.tree.depth[static_cast<NodeId>(fx.tree.n - 1)], leaf};
    PtReduceOutcome out = pt.reduce_level(0, query, nullptr);
    if (out.consumed == 0 && out.residual.len == block) CHECK(out.residual.root == leaf);
  }
}

TEST_CASE("query fixtures on TREE-A") {
  Fixture fx(make_tree_a());
  PtIndex pt;
  pt.build(fx.ctx);
  LcePtResult r = pt.query(1, 7, 2);
  CHECK(r.length == 2);
  CHECK(r.path_end == 5);
  CHECK(r.tree_end == 6);
  LcePtResult s = pt.query(1, 3, 2);
  CHECK(s.length == 1);
  CHECK(s.path_end == 3);
  CHECK(s.tree_end == 4);
  CHECK(pt.query(5, 5, 5).length == 0);
  CHECK_THROWS_AS(pt.query(1, 8, 0), PreconditionError);

  // Base walk endpoints: full match and first-symbol mismatch.
  auto [len1, end1] = pt.base_walk(PtQuery{7, 3, 2}, nullptr);  // "abc" below 2
  CHECK(len1 == 2);
  CHECK(end1 == 6);
  auto [len0, end0] = pt.base_walk(PtQuery{8, 3, 1}, nullptr);  // "abd" below 1
  CHECK(len0 == 2);
  CHECK(end0 == 5);
}

TEST_CASE("query equals oracle across shapes, modes agree") {
  std::mt19937_64 rng(107);
  for (TreeShape shape :
       {TreeShape::kPath, TreeShape::kCaterpillar, TreeShape::kRandom, TreeShape::kBinary}) {
    for (std::int64_t sigma : {1, 2, 4}) {
      Fixture fx(gen_random_tree({3000, sigma, shape, rng()}));
      PtIndex simple, compact;
      simple.build(fx.ctx, PtConfig{IndexMode::kSimple});
      compact.build(fx.ctx, PtConfig{IndexMode::kCompact});
      for (int q = 0; q < 3000; ++q) {
        auto [v1, w1] = random_path(fx.tree, rng);
        NodeId v2 = random_node(fx.tree, rng);
        LcePtResult want = oracle::lce_pt(fx.tree, v1, w1, v2);
        LcePtResult got = simple.query(v1, w1, v2);
        CHECK(got.length == want.length);
        CHECK(got.path_end == want.path_end);
        CHECK(got.tree_end == want.tree_end);
        LcePtResult fast = compact.query(v1, w1, v2);
        CHECK(fast.length == want.length);
        CHECK(fast.path_end == want.path_end);
        CHECK(fast.tree_end == want.tree_end);
      }
    }
  }
}

TEST_CASE("dominance, consistency, and maximality") {
  std::mt19937_64 rng(109);
  Fixture fx(gen_random_tree({2500, 2, TreeShape::kCaterpillar, 29}));
  PtIndex pt;
  pt.build(fx.ctx);
  PpIndex pp;
  pp.build(fx.ctx);
  for (int q = 0; q < 4000; ++q) {
    auto [v1, w1] = random_path(fx.tree, rng);
    NodeId v2 = random_node(fx.tree, rng);
    LcePtResult r = pt.query(v1, w1, v2);

    // Extracted strings match and the result is maximal.
    CHECK(fx.tree.is_ancestor(v2, r.tree_end));
    CHECK(fx.tree.depth[r.tree_end] - fx.tree.depth[v2] == r.length);
    CHECK(prefix_symbols(fx.tree, v1, w1, r.length) ==
          path_symbols(fx.tree, make_path(fx.tree, v2, r.tree_end)));
    std::int64_t path_len = fx.tree.depth[w1] - fx.tree.depth[v1];
    if (r.length < path_len) {
      Symbol next = fx.tree.label[fx.ctx.prim.level_ancestor(
          w1, fx.tree.depth[v1] + r.length + 1)];
      CHECK(fx.tree.child_by_symbol(r.tree_end, next) == kNoNode);
    }

    // Path-tree dominates path-path into any descendant of the root.
    NodeId w2 = random_node(fx.tree, rng);
    if (fx.tree.is_ancestor(v2, w2))
      CHECK(r.length >= pp.query(v1, w1, v2, w2).length);
  }
}

TEST_CASE("per-query level invocations stay within the stack") {
  std::mt19937_64 rng(113);
  Fixture fx(gen_random_tree({30000, 2, TreeShape::kPath, 31}));
  PtIndex pt;
  pt.build(fx.ctx);
  for (int q = 0; q < 300; ++q) {
    auto [v1, w1] = random_path(fx.tree, rng);
    NodeId v2 = random_node(fx.tree, rng);
    QueryStats stats;
    pt.query(v1, w1, v2, &stats);
    CHECK(stats.level_invocations <= pt.levels().size());
  }
}
