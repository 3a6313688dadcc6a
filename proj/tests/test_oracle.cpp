#include <doctest.h>

#include <algorithm>
#include <set>

#include "testutil.hpp"

using namespace treelce;
using namespace treelce::test;

TEST_CASE("oracle fixtures on TREE-A") {
  Fixture fx(make_tree_a());
  CHECK(oracle::lce_pp(fx.tree, 1, 7, 2, 8).length == 2);
  CHECK(oracle::lce_pp(fx.tree, 1, 7, 1, 7).length == 3);
  CHECK(oracle::lce_pp(fx.tree, 0, 7, 0, 8).length == 0);
  CHECK_THROWS_AS(oracle::lce_pp(fx.tree, 1, 8, 0, 0), PreconditionError);

  LcePtResult pt = oracle::lce_pt(fx.tree, 1, 7, 2);
  CHECK(pt.length == 2);
  CHECK(pt.path_end == 5);
  CHECK(pt.tree_end == 6);
  CHECK(oracle::lce_pt(fx.tree, 1, 3, 2).length == 1);
  CHECK(oracle::lce_pt(fx.tree, 5, 5, 5).length == 0);

  LceTtResult tt = oracle::lce_tt(fx.tree, 1, 2);
  CHECK(tt.length == 2);
  CHECK(tt.end1 == 5);
  CHECK(tt.end2 == 6);
  CHECK(oracle::lce_tt(fx.tree, 7, 8).length == 0);
  CHECK(oracle::lce_tt(fx.tree, 2, 2).length == oracle::subtree_height(fx.tree, 2));
  LceTtResult self = oracle::lce_tt(fx.tree, 0, 0);
  CHECK(self.length == 4);
  CHECK(self.end1 == 7);
  CHECK(self.end2 == 7);
}

TEST_CASE("oracles are mutually consistent on small trees") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 12; ++it) {
    GenResult gen = gen_random_tree({2 + static_cast<std::int64_t>(rng() % 59),
                                     1 + static_cast<std::int64_t>(rng() % 3),
                                     it % 2 ? TreeShape::kRandom : TreeShape::kCaterpillar, rng()});
    const LabeledTree& tree = gen.tree;
    std::vector<NodeId> leaves;
    for (NodeId v = 0; v < static_cast<NodeId>(tree.n); ++v)
      if (tree.children[v].empty()) leaves.push_back(v);

    for (NodeId v1 = 0; v1 < static_cast<NodeId>(tree.n); ++v1) {
      for (NodeId v2 = 0; v2 < static_cast<NodeId>(tree.n); ++v2) {
        // tree-tree equals the best leaf-pair path-path
        std::int64_t best = 0;
        for (NodeId l1 : leaves) {
          if (!tree.is_ancestor(v1, l1)) continue;
          for (NodeId l2 : leaves) {
            if (!tree.is_ancestor(v2, l2)) continue;
            best = std::max(best, oracle::lce_pp(tree, v1, l1, v2, l2).length);
          }
        }
        CHECK(oracle::lce_tt(tree, v1, v2).length == best);
      }
    }
    // path-tree equals the best path-path against any leaf below the root arg
    for (int q = 0; q < 200; ++q) {
      auto [v1, w1] = random_path(tree, rng);
      NodeId v2 = random_node(tree, rng);
      std::int64_t best = 0;
      for (NodeId l2 : leaves) {
        if (!tree.is_ancestor(v2, l2)) continue;
        best = std::max(best, oracle::lce_pp(tree, v1, w1, v2, l2).length);
      }
      CHECK(oracle::lce_pt(tree, v1, w1, v2).length == best);
    }
  }
}

TEST_CASE("generator shapes and determinism") {
  GenResult path = gen_random_tree({5, 1, TreeShape::kPath, 3});
  CHECK(path.tree.n == 5);
  for (NodeId v = 1; v < 5; ++v) {
    CHECK(path.tree.parent[v] == v - 1);
    CHECK(path.symbols.token(path.tree.label[v]) == "a");
  }

  GenResult star = gen_random_tree({5, 4, TreeShape::kStar, 3});
  CHECK(star.tree.n == 5);
  CHECK(star.tree.children[0].size() == 4);
  std::set<Symbol> labels;
  for (auto [s, c] : star.tree.children[0]) labels.insert(s);
  CHECK(labels.size() == 4);

  // Star with fewer symbols than children merges on normalization.
  GenResult small = gen_random_tree({10, 3, TreeShape::kStar, 3});
  CHECK(small.tree.n == 4);
  CHECK(small.requested_n == 10);

  GenResult a = gen_random_tree({100, 4, TreeShape::kRandom, 42});
  GenResult b = gen_random_tree({100, 4, TreeShape::kRandom, 42});
  REQUIRE(a.tree.n == b.tree.n);
  CHECK(a.tree.parent == b.tree.parent);
  CHECK(a.tree.label == b.tree.label);

  CHECK_THROWS_AS(gen_random_tree({0, 1, TreeShape::kPath, 0}), PreconditionError);
  CHECK_THROWS_AS(gen_random_tree({5, 0, TreeShape::kPath, 0}), PreconditionError);
}
