#include <doctest.h>

#include <algorithm>
#include <set>

#include "testutil.hpp"

using namespace treelce;
using namespace treelce::test;

TEST_CASE("parse smallest tree") {
  ParseResult r = parse_tree("2\n0 1 a\n");
  CHECK(r.tree.n == 2);
  CHECK(r.tree.depth[1] == 1);
  CHECK(r.symbols.token(r.tree.label[1]) == "a");
  CHECK(!r.remap.has_value());
}

TEST_CASE("parse TREE-A") {
  ParseResult r = make_tree_a();
  CHECK(r.tree.n == 10);
  CHECK(r.tree.depth[7] == 4);
  CHECK(!r.remap.has_value());
  REQUIRE(r.tree.children[4].size() == 2);
  CHECK(r.symbols.token(r.tree.children[4][0].first) == "b");
  CHECK(r.tree.children[4][0].second == 6);
  CHECK(r.symbols.token(r.tree.children[4][1].first) == "c");
  CHECK(r.tree.children[4][1].second == 9);
}

TEST_CASE("parse merges duplicate sibling labels") {
  ParseResult r = parse_tree("3\n0 1 a\n0 2 a\n");
  CHECK(r.tree.n == 2);
  REQUIRE(r.remap.has_value());
  CHECK((*r.remap)[1] == 1);
  CHECK((*r.remap)[2] == 1);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_tree(""), ParseError);
  CHECK_THROWS_AS(parse_tree("2\n0 1\n"), ParseError);         // malformed line
  CHECK_THROWS_AS(parse_tree("2\n0 5 a\n"), ParseError);       // id out of range
  CHECK_THROWS_AS(parse_tree("3\n0 1 a\n0 1 b\n"), ParseError);  // multiple parents
  CHECK_THROWS_AS(parse_tree("3\n2 1 a\n1 2 b\n"), ParseError);  // cycle
  CHECK_THROWS_AS(parse_tree("3\n0 1 a\n"), ParseError);        // missing edge line
  CHECK_THROWS_AS(parse_tree("2\n1 0 a\n"), ParseError);        // root as child
}

TEST_CASE("build_trie basics") {
  TrieResult t = build_trie({{"a", "b"}, {"a", "c"}});
  CHECK(t.tree.n == 4);
  CHECK(t.leaf_of.size() == 2);
  CHECK(t.leaf_of[0] != t.leaf_of[1]);

  TrieResult dup = build_trie({{"a"}, {"a"}});
  CHECK(dup.tree.n == 2);
  CHECK(dup.leaf_of[0] == dup.leaf_of[1]);

  // Node count equals the number of distinct prefixes, by trie definition.
  std::vector<std::vector<std::string>> strings = {{"a", "b", "c"}, {"a", "b", "d"}, {"a", "c"}};
  std::set<std::vector<std::string>> prefixes;
  for (const auto& s : strings)
    for (std::size_t len = 0; len <= s.size(); ++len)
      prefixes.insert(std::vector<std::string>(s.begin(), s.begin() + len));
  TrieResult t3 = build_trie(strings);
  CHECK(t3.tree.n == static_cast<std::int64_t>(prefixes.size()));
  CHECK(t3.tree.n == 6);

  CHECK_THROWS_AS(build_trie({}), PreconditionError);
  CHECK_THROWS_AS(build_trie({{}}), PreconditionError);
}

TEST_CASE("trie contains exactly the input strings") {
  std::mt19937_64 rng(7);
  std::vector<std::vector<std::string>> strings;
  for (int i = 0; i < 50; ++i) {
    std::vector<std::string> s;
    std::size_t len = 1 + rng() % 8;
    for (std::size_t j = 0; j < len; ++j) s.push_back(std::string(1, char('a' + rng() % 3)));
    strings.push_back(std::move(s));
  }
  TrieResult t = build_trie(strings);
  for (std::size_t i = 0; i < strings.size(); ++i) {
    std::vector<Symbol> syms =
        path_symbols(t.tree, make_path(t.tree, 0, t.leaf_of[i]));
    REQUIRE(syms.size() == strings[i].size());
    for (std::size_t j = 0; j < syms.size(); ++j)
      CHECK(t.symbols.token(syms[j]) == strings[i][j]);
  }
  // Every leaf of the trie ends some input string.
  std::set<NodeId> ends(t.leaf_of.begin(), t.leaf_of.end());
  for (NodeId v = 0; v < static_cast<NodeId>(t.tree.n); ++v)
    if (t.tree.children[v].empty()) CHECK(ends.count(v) == 1);
}

TEST_CASE("is_ancestor against a parent walk") {
  ParseResult r = make_tree_a();
  CHECK(r.tree.is_ancestor(4, 9));
  CHECK(!r.tree.is_ancestor(1, 8));
  CHECK(r.tree.is_ancestor(3, 3));
  CHECK_THROWS_AS((void)r.tree.is_ancestor(0, 99), PreconditionError);

  std::mt19937_64 rng(11);
  GenResult gen = gen_random_tree({300, 3, TreeShape::kRandom, 5});
  for (int it = 0; it < 2000; ++it) {
    NodeId u = random_node(gen.tree, rng), v = random_node(gen.tree, rng);
    bool naive = false;
    for (NodeId cur = v; cur != kNoNode; cur = gen.tree.parent[cur])
      if (cur == u) {
        naive = true;
        break;
      }
    CHECK(gen.tree.is_ancestor(u, v) == naive);
  }
}

TEST_CASE("path_string fixtures") {
  ParseResult r = make_tree_a();
  auto text = [&](NodeId v, NodeId w) {
    std::string out;
    for (Symbol s : path_symbols(r.tree, make_path(r.tree, v, w))) out += r.symbols.token(s);
    return out;
  };
  CHECK(text(1, 7) == "abc");
  CHECK(text(2, 9) == "ac");
  CHECK(text(5, 5) == "");
  CHECK_THROWS_AS(make_path(r.tree, 1, 8), PreconditionError);
}

TEST_CASE("normalize reaches a fixed point and preserves strings") {
  ParseResult a = make_tree_a();
  NormalizeResult idn = normalize(a.tree);
  CHECK(!idn.changed);
  for (NodeId v = 0; v < 10; ++v) CHECK(idn.remap[v] == v);

  // Two sibling 'a' edges whose subtrees hold 'b' and 'c'.
  ParseResult two = parse_tree("5\n0 1 a\n0 2 a\n1 3 b\n2 4 c\n");
  CHECK(two.tree.n == 4);
  REQUIRE(two.remap.has_value());
  CHECK((*two.remap)[1] == (*two.remap)[2]);
  NodeId merged = (*two.remap)[1];
  CHECK(two.tree.children[merged].size() == 2);

  // Chain of duplicates that needs a second merge round.
  ParseResult chain = parse_tree("7\n0 1 a\n0 2 a\n1 3 b\n2 4 b\n3 5 c\n4 6 d\n");
  CHECK(!chain.tree.has_duplicate_sibling_labels());
  CHECK(chain.tree.n == 5);

  // Root-to-leaf string sets are preserved by normalization.
  std::mt19937_64 rng(3);
  for (int it = 0; it < 20; ++it) {
    LabeledTree raw;
    std::int64_t n = 2 + static_cast<std::int64_t>(rng() % 40);
    raw.n = n;
    raw.parent.assign(static_cast<std::size_t>(n), kNoNode);
    raw.label.assign(static_cast<std::size_t>(n), kNoSymbol);
    for (std::int64_t v = 1; v < n; ++v) {
      raw.parent[static_cast<std::size_t>(v)] = static_cast<NodeId>(rng() % static_cast<std::uint64_t>(v));
      raw.label[static_cast<std::size_t>(v)] = static_cast<Symbol>(rng() % 2);
    }
    raw.finalize();
    NormalizeResult norm = normalize(raw);
    CHECK(!norm.tree.has_duplicate_sibling_labels());

    // The prefix-closed set of root-to-node strings is preserved exactly
    // (nodes merge iff their strings coincide). Root-to-leaf sets can lose
    // a string when a leaf merges into an internal sibling.
    std::set<std::vector<Symbol>> before, after;
    for (NodeId v = 0; v < static_cast<NodeId>(raw.n); ++v)
      before.insert(path_symbols(raw, make_path(raw, 0, v)));
    for (NodeId v = 0; v < static_cast<NodeId>(norm.tree.n); ++v)
      after.insert(path_symbols(norm.tree, make_path(norm.tree, 0, v)));
    CHECK(before == after);
    // Remapped nodes keep their strings, so LCE answers are unchanged.
    for (NodeId v = 0; v < static_cast<NodeId>(raw.n); ++v)
      CHECK(path_symbols(raw, make_path(raw, 0, v)) ==
            path_symbols(norm.tree, make_path(norm.tree, 0, norm.remap[v])));
  }
}

TEST_CASE("parse of serialize is the identity on normalized trees") {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 10; ++it) {
    GenResult gen = gen_random_tree(
        {2 + static_cast<std::int64_t>(rng() % 200), 1 + static_cast<std::int64_t>(rng() % 4),
         TreeShape::kRandom, rng()});
    std::string text = serialize_tree(gen.tree, gen.symbols);
    ParseResult back = parse_tree(text);
    CHECK(!back.remap.has_value());
    REQUIRE(back.tree.n == gen.tree.n);
    for (NodeId v = 0; v < static_cast<NodeId>(gen.tree.n); ++v) {
      CHECK(back.tree.parent[v] == gen.tree.parent[v]);
      CHECK(back.tree.depth[v] == gen.tree.depth[v]);
      if (v != 0)
        CHECK(back.symbols.token(back.tree.label[v]) == gen.symbols.token(gen.tree.label[v]));
    }
  }
}
