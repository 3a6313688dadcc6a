#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "treelce/common.hpp"
#include "treelce/oracle.hpp"
#include "treelce/primitives.hpp"
#include "treelce/tree.hpp"

namespace treelce {

class NamingIndex;

/// Order-preserving name of a fixed-length downward path: the ranks of the
/// two power-of-two windows covering it. Equal names iff equal label strings;
/// (hi, lo) pair order equals lexicographic string order for a fixed length.
struct PathName {
  std::uint32_t hi = 0;
  std::uint32_t lo = 0;
  std::int64_t len = 0;

  friend bool operator==(const PathName&, const PathName&) = default;
  friend auto operator<=>(const PathName&, const PathName&) = default;
};

/// Nodes carrying a downward path of a fixed length L, sorted by that path's
/// label string, with exact neighbour LCEs and an RMQ on top. Lookup by node,
/// then any pairwise LCE is one range minimum.
class SortedPathList {
 public:
  SortedPathList() = default;

  void build(const NamingIndex& naming, std::vector<NodeId> nodes, std::int64_t path_len);

  std::int64_t path_len() const { return path_len_; }
  std::size_t size() const { return order_.size(); }
  NodeId node_at(std::uint32_t pos) const { return order_[pos]; }

  std::uint32_t position_of(NodeId v, QueryStats* stats = nullptr) const;

  /// String LCE of the two listed paths, in symbols.
  std::int64_t lce_between(std::uint32_t i, std::uint32_t j, QueryStats* stats = nullptr) const;
  std::int64_t adjacent_lce(std::uint32_t i) const { return adj_lce_[i]; }

 private:
  std::int64_t path_len_ = 0;
  std::vector<NodeId> order_;
  std::vector<std::pair<NodeId, std::uint32_t>> pos_;  // sorted by node id
  std::vector<std::int64_t> adj_lce_;                  // adj_lce_[i] = lce(order_[i], order_[i+1])
  RmqIndex rmq_;
};

struct NamingConfig {
  // Builds the per-level full sorted lists backing lce_pp_simple. The level
  // rank tables and the upward suffix order are always built.
  bool simple_pp_lists = false;
};

/// Doubling name tables over downward paths plus the upward suffix order.
/// rank(k, v) is the lexicographic rank of the length-2^k path ending at v;
/// the upward order sorts nodes by their full upward-to-root strings and
/// carries adjacent LCPs with an RMQ, answering upward LCE queries in O(1).
class NamingIndex {
 public:
  NamingIndex() = default;

  void build(const LabeledTree& tree, const PrimitivesIndex& prim,
             const NamingConfig& config = {});

  const LabeledTree& tree() const { return *tree_; }
  const PrimitivesIndex& prim() const { return *prim_; }

  int rank_levels() const { return static_cast<int>(rank_.size()); }
  bool has_rank(int k, NodeId v) const { return rank_[static_cast<std::size_t>(k)][v] != kNoPos; }
  std::uint32_t rank(int k, NodeId v) const { return rank_[static_cast<std::size_t>(k)][v]; }
  const std::vector<NodeId>& level_nodes(int k) const {
    return level_nodes_[static_cast<std::size_t>(k)];
  }

  /// Composite name of the length-L path ending at v; L == 0 is the empty name.
  PathName name_fixed(NodeId v, std::int64_t path_len, QueryStats* stats = nullptr) const;

  /// True iff the length-L paths ending at u and v are label-identical.
  bool paths_equal(NodeId u, NodeId v, std::int64_t path_len, QueryStats* stats = nullptr) const;

  /// Longest common prefix of the upward-to-root strings of u and v.
  std::int64_t upward_lce(NodeId u, NodeId v, QueryStats* stats = nullptr) const;

  /// Longest common prefix of the length-L downward paths ending at u and v.
  std::int64_t fixed_path_lce(NodeId u, NodeId v, std::int64_t path_len,
                              QueryStats* stats = nullptr) const;

  bool has_simple_pp() const { return !simple_lists_.empty() || rank_levels() == 0; }

  /// Path-path LCE via the per-length sorted lists (the O(n log n) structure).
  LceResult lce_pp_simple(NodeId v1, NodeId w1, NodeId v2, NodeId w2,
                          QueryStats* stats = nullptr) const;

  const SortedPathList& simple_list(int k) const {
    return simple_lists_[static_cast<std::size_t>(k)];
  }

 private:
  std::int64_t simple_list_lce(int k, NodeId a, NodeId b, QueryStats* stats) const;

  const LabeledTree* tree_ = nullptr;
  const PrimitivesIndex* prim_ = nullptr;
  std::vector<std::vector<std::uint32_t>> rank_;
  std::vector<std::vector<NodeId>> level_nodes_;
  std::vector<NodeId> suforder_;
  std::vector<std::uint32_t> sufpos_;
  std::vector<std::int64_t> suflcp_;
  RmqIndex suflcp_rmq_;
  std::vector<SortedPathList> simple_lists_;
};

}  // namespace treelce
