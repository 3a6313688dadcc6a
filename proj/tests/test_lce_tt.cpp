#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "testutil.hpp"

using namespace treelce;
using namespace treelce::test;

namespace {

void check_partition(const LabeledTree& tree, const ClusterPartition& part) {
  const std::int64_t n = tree.n;
  const std::int64_t tau = part.tau();
  CHECK(static_cast<std::int64_t>(part.clusters().size()) <= 4 * tau);

  std::vector<int> edge_seen(static_cast<std::size_t>(n), 0);
  for (const Cluster& c : part.clusters()) {
    CHECK(!c.edges.empty());
    CHECK(c.boundary.size() <= 2);
    CHECK(static_cast<std::int64_t>(c.nodes.size()) <= 4 * ((n + tau - 1) / tau) + 2);
    for (NodeId e : c.edges) ++edge_seen[e];

    // Connectivity: every edge's parent endpoint lies in the cluster.
    std::set<NodeId> nodes(c.nodes.begin(), c.nodes.end());
    std::set<NodeId> heads;
    for (NodeId e : c.edges) {
      CHECK(nodes.count(e) == 1);
      CHECK(nodes.count(tree.parent[e]) == 1);
      heads.insert(tree.parent[e]);
    }
    // A connected edge set has exactly one node that is not a child endpoint.
    std::set<NodeId> childs(c.edges.begin(), c.edges.end());
    int tops = 0;
    for (NodeId v : c.nodes) tops += childs.count(v) == 0;
    CHECK(tops == 1);

    // Boundary definition: an incident tree edge outside the cluster.
    for (NodeId v : c.nodes) {
      std::int64_t deg = (v != 0 ? 1 : 0) + static_cast<std::int64_t>(tree.children[v].size());
      std::int64_t indeg = 0;
      for (NodeId e : c.edges) indeg += e == v || tree.parent[e] == v;
      bool is_b = std::find(c.boundary.begin(), c.boundary.end(), v) != c.boundary.end();
      CHECK(is_b == (indeg != deg));
    }
  }
  for (std::int64_t v = 1; v < n; ++v) CHECK(edge_seen[static_cast<std::size_t>(v)] == 1);
}

}  // namespace

TEST_CASE("cluster partition invariants on fixtures") {
  GenResult path = gen_random_tree({100, 1, TreeShape::kPath, 0});
  ClusterPartition part;
  part.build(path.tree, 10);
  check_partition(path.tree, part);

  // tau = 1: a single cluster with no boundary nodes is possible.
  ClusterPartition whole;
  whole.build(path.tree, 1);
  check_partition(path.tree, whole);
  CHECK(whole.clusters().size() == 1);
  CHECK(whole.clusters()[0].boundary.empty());

  // Star: the center is the boundary of every cluster that touches it.
  GenResult star = gen_random_tree({100, 99, TreeShape::kStar, 0});
  ClusterPartition sp;
  sp.build(star.tree, 10);
  check_partition(star.tree, sp);
  for (const Cluster& c : sp.clusters())
    if (c.edges.size() < 99) {
      REQUIRE(c.boundary.size() == 1);
      CHECK(c.boundary[0] == 0);
    }

  CHECK_THROWS_AS(part.build(path.tree, 0), PreconditionError);
  CHECK_THROWS_AS(part.build(path.tree, 101), PreconditionError);
  GenResult single = gen_random_tree({1, 1, TreeShape::kPath, 0});
  CHECK_THROWS_AS(part.build(single.tree, 1), PreconditionError);
}

TEST_CASE("cluster partition invariants across shapes and tau") {
  std::mt19937_64 rng(127);
  for (TreeShape shape : {TreeShape::kPath, TreeShape::kRandom, TreeShape::kCaterpillar,
                          TreeShape::kBinary, TreeShape::kStar}) {
    GenResult gen = gen_random_tree({1000, 4, shape, rng()});
    const std::int64_t n = gen.tree.n;
    for (std::int64_t tau :
         {std::int64_t(1), static_cast<std::int64_t>(std::ceil(std::sqrt(double(n)))), n}) {
      ClusterPartition part;
      part.build(gen.tree, tau);
      check_partition(gen.tree, part);
    }
  }
}

TEST_CASE("set family tree and Fig.2-style demo") {
  std::vector<std::vector<std::int64_t>> sets{{1, 2}, {1, 4}, {2, 3, 4}, {3}};
  SetFamilyTree fam = family_to_tree(sets);
  CHECK(fam.tree.n == 1 + 4 + 8);  // root, one node per set, one per element
  CHECK(fam.set_node.size() == 4);

  TtIndex tt;
  tt.build(fam.tree, 3);
  CHECK(tt.query(fam.set_node[0], fam.set_node[2]).length == 1);  // S1 and S3 intersect
  CHECK(tt.query(fam.set_node[1], fam.set_node[3]).length == 0);  // S2 and S4 disjoint
  CHECK(disjoint(tt, fam, 1, 3));
  CHECK(!disjoint(tt, fam, 0, 2));
  CHECK(!disjoint(tt, fam, 2, 2));  // nonempty set intersects itself
  CHECK_THROWS_AS(disjoint(tt, fam, 0, 9), PreconditionError);

  // Empty sets are accepted as leaves and are disjoint from everything.
  SetFamilyTree fam2 = family_to_tree({{7}, {}});
  TtIndex tt2;
  tt2.build(fam2.tree, 1);
  CHECK(disjoint(tt2, fam2, 0, 1));
  CHECK(disjoint(tt2, fam2, 1, 1));

  SetFamilyTree singleton = family_to_tree({{7}});
  CHECK(singleton.tree.n == 3);
  CHECK_THROWS_AS(family_to_tree({}), PreconditionError);
}

TEST_CASE("table entries match the oracle") {
  std::mt19937_64 rng(131);
  for (int it = 0; it < 6; ++it) {
    GenResult gen = gen_random_tree({2 + static_cast<std::int64_t>(rng() % 1999),
                                     1 + static_cast<std::int64_t>(rng() % 3),
                                     it % 2 ? TreeShape::kRandom : TreeShape::kCaterpillar, rng()});
    std::int64_t tau = 1 + static_cast<std::int64_t>(rng() % 20);
    tau = std::min(tau, gen.tree.n);
    TtIndex tt;
    tt.build(gen.tree, tau);
    for (NodeId b : tt.partition().boundary_nodes()) {
      // boundary against itself: subtree height
      CHECK(tt.table_entry(b, b).length == oracle::subtree_height(gen.tree, b));
      for (int q = 0; q < 40; ++q) {
        NodeId v = random_node(gen.tree, rng);
        LceTtResult want = oracle::lce_tt(gen.tree, v, b);
        LceTtResult got = tt.table_entry(v, b);
        CHECK(got.length == want.length);
        if (want.length > 0) {
          CHECK(got.end1 == want.end1);
          CHECK(got.end2 == want.end2);
        }
      }
    }
  }
}

TEST_CASE("query fixtures on TREE-A") {
  Fixture fx(make_tree_a());
  TtIndex tt;
  tt.build(fx.tree, 3);
  LceTtResult r = tt.query(1, 2);
  CHECK(r.length == 2);
  CHECK(r.end1 == 5);
  CHECK(r.end2 == 6);
  LceTtResult self = tt.query(0, 0);
  CHECK(self.length == 4);
  CHECK(self.end1 == 7);
  CHECK(self.end2 == 7);
  CHECK_THROWS_AS(tt.query(0, 99), PreconditionError);
}

TEST_CASE("query equals oracle across shapes and tau") {
  std::mt19937_64 rng(137);
  for (TreeShape shape : {TreeShape::kPath, TreeShape::kRandom, TreeShape::kCaterpillar}) {
    for (std::int64_t n : {std::int64_t(300), std::int64_t(2000)}) {
      GenResult gen = gen_random_tree({n, 2, shape, rng()});
      std::vector<std::int64_t> taus{
          1, static_cast<std::int64_t>(std::ceil(std::sqrt(double(gen.tree.n))))};
      if (n <= 300) taus.push_back(gen.tree.n);  // full-table regime kept small
      for (std::int64_t tau : taus) {
        TtIndex tt;
        tt.build(gen.tree, tau);
        for (int q = 0; q < 2500; ++q) {
          NodeId v1 = random_node(gen.tree, rng), v2 = random_node(gen.tree, rng);
          LceTtResult want = oracle::lce_tt(gen.tree, v1, v2);
          LceTtResult got = tt.query(v1, v2);
          CHECK(got.length == want.length);
          CHECK(got.end1 == want.end1);
          CHECK(got.end2 == want.end2);
          CHECK(tt.query(v2, v1).length == got.length);  // symmetry
          // Realizes-and-maximal: equal strings, bounded by subtree heights.
          CHECK(path_symbols(gen.tree, make_path(gen.tree, v1, got.end1)) ==
                path_symbols(gen.tree, make_path(gen.tree, v2, got.end2)));
        }
        // Self query returns the subtree height.
        for (int q = 0; q < 50; ++q) {
          NodeId v = random_node(gen.tree, rng);
          CHECK(tt.query(v, v).length == oracle::subtree_height(gen.tree, v));
        }
      }
    }
  }
}

TEST_CASE("traversal counter is bounded by the cluster sizes") {
  GenResult gen = gen_random_tree({4096, 2, TreeShape::kPath, 13});
  std::int64_t tau = 64;
  TtIndex tt;
  tt.build(gen.tree, tau);
  std::mt19937_64 rng(139);
  for (int q = 0; q < 500; ++q) {
    NodeId v1 = random_node(gen.tree, rng), v2 = random_node(gen.tree, rng);
    QueryStats stats;
    tt.query(v1, v2, &stats);
    CHECK(stats.traversal_steps <= 8u * 4096u / 64u);
  }
}

TEST_CASE("random families agree with direct intersection") {
  std::mt19937_64 rng(149);
  for (int it = 0; it < 30; ++it) {
    std::vector<std::vector<std::int64_t>> sets(2 + rng() % 12);
    for (auto& s : sets) {
      std::size_t len = rng() % 8;
      for (std::size_t i = 0; i < len; ++i) s.push_back(static_cast<std::int64_t>(rng() % 30));
    }
    SetFamilyTree fam = family_to_tree(sets);
    TtIndex tt;
    tt.build(fam.tree, std::max<std::int64_t>(1, fam.tree.n / 4));
    for (std::size_t i = 0; i < sets.size(); ++i)
      for (std::size_t j = 0; j < sets.size(); ++j) {
        bool naive = true;
        for (std::int64_t a : sets[i])
          for (std::int64_t b : sets[j]) naive = naive && a != b;
        CHECK(disjoint(tt, fam, i, j) == naive);
      }
  }
}
