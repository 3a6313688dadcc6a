#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treelce/common.hpp"
#include "treelce/tree.hpp"

namespace treelce {

struct LceResult {
  std::int64_t length = 0;
  NodeId end1 = kNoNode;  // last matched node on path 1 (v1 when length == 0)
  NodeId end2 = kNoNode;
};

struct LcePtResult {
  std::int64_t length = 0;
  NodeId path_end = kNoNode;
  NodeId tree_end = kNoNode;
};

struct LceTtResult {
  std::int64_t length = 0;
  NodeId end1 = kNoNode;
  NodeId end2 = kNoNode;
};

// Brute-force reference implementations. Deliberately naive and independent
// of every index structure: ancestors are found by parent walks and children
// by linear scans, so these are credible ground truth for the fast paths.
namespace oracle {

LceResult lce_pp(const LabeledTree& tree, NodeId v1, NodeId w1, NodeId v2, NodeId w2);
LcePtResult lce_pt(const LabeledTree& tree, NodeId v1, NodeId w1, NodeId v2);
LceTtResult lce_tt(const LabeledTree& tree, NodeId v1, NodeId v2);

/// Height of the subtree rooted at v (edges).
std::int64_t subtree_height(const LabeledTree& tree, NodeId v);

}  // namespace oracle

enum class TreeShape { kRandom, kPath, kCaterpillar, kBinary, kStar };

TreeShape shape_from_name(const std::string& name);
const char* shape_name(TreeShape s);

struct GenSpec {
  std::int64_t n = 1;
  std::int64_t sigma = 1;
  TreeShape shape = TreeShape::kRandom;
  std::uint64_t seed = 0;
};

struct GenResult {
  LabeledTree tree;
  SymbolTable symbols;
  std::int64_t requested_n = 0;  // n may shrink when normalization merges
};

/// Deterministic instance generator; identical spec -> identical tree.
GenResult gen_random_tree(const GenSpec& spec);

}  // namespace treelce
