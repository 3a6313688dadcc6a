#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "treelce/common.hpp"
#include "treelce/tree.hpp"

namespace treelce {

/// Range-minimum index over a fixed array. Block decomposition with a sparse
/// table over block minima; answers are the leftmost minimizing position.
class RmqIndex {
 public:
  RmqIndex() = default;
  explicit RmqIndex(std::vector<std::int64_t> values) { build(std::move(values)); }

  void build(std::vector<std::int64_t> values);

  std::size_t size() const { return values_.size(); }
  std::int64_t value_at(std::uint32_t i) const { return values_[i]; }

  /// Leftmost position of the minimum in [i, j], inclusive.
  std::uint32_t min_pos(std::uint32_t i, std::uint32_t j, QueryStats* stats = nullptr) const;
  std::int64_t min_value(std::uint32_t i, std::uint32_t j, QueryStats* stats = nullptr) const;

 private:
  static constexpr std::uint32_t kBlockBits = 5;

  std::uint32_t scan(std::uint32_t i, std::uint32_t j) const;  // inclusive, leftmost
  std::uint32_t pick(std::uint32_t a, std::uint32_t b) const {
    return values_[b] < values_[a] ? b : a;  // ties keep the left position
  }

  std::vector<std::int64_t> values_;
  std::vector<std::vector<std::uint32_t>> sparse_;  // over block argmins
};

/// Predecessor structure over a key set: largest stored key <= x. The default
/// is a plain sorted array with binary search; the bucketed variant adds a
/// top-level radix directory and must be answer-identical.
class PredIndex {
 public:
  enum class Kind { kBinarySearch, kBucketed };

  PredIndex() = default;
  explicit PredIndex(std::vector<std::uint64_t> keys, Kind kind = Kind::kBinarySearch) {
    build(std::move(keys), kind);
  }

  void build(std::vector<std::uint64_t> keys, Kind kind = Kind::kBinarySearch);

  std::optional<std::uint64_t> predecessor(std::uint64_t x, QueryStats* stats = nullptr) const;
  std::size_t size() const { return keys_.size(); }

 private:
  std::vector<std::uint64_t> keys_;  // strictly increasing
  Kind kind_ = Kind::kBinarySearch;
  std::uint32_t shift_ = 0;
  std::vector<std::uint32_t> bucket_start_;  // index of first key in bucket
};

/// Constant-factor tree lookups: level ancestor via binary lifting, NCA via
/// euler tour + RMQ, child-by-symbol via a seeded hash table.
class PrimitivesIndex {
 public:
  PrimitivesIndex() = default;

  void build(const LabeledTree& tree);

  const LabeledTree& tree() const { return *tree_; }
  std::int64_t depth(NodeId v) const { return tree_->depth[v]; }

  /// Ancestor of v at depth d; requires 0 <= d <= depth(v).
  NodeId level_ancestor(NodeId v, std::int64_t d, QueryStats* stats = nullptr) const;

  /// Ancestor k edges above v; requires k <= depth(v).
  NodeId kth_ancestor(NodeId v, std::int64_t k, QueryStats* stats = nullptr) const {
    return level_ancestor(v, tree_->depth[v] - k, stats);
  }

  NodeId nca(NodeId u, NodeId v, QueryStats* stats = nullptr) const;

  /// Unique child of v along symbol s, or kNoNode.
  NodeId child_by_label(NodeId v, Symbol s, QueryStats* stats = nullptr) const;

  int lifting_levels() const { return static_cast<int>(up_.size()); }
  NodeId up(int k, NodeId v) const { return up_[static_cast<std::size_t>(k)][v]; }

 private:
  const LabeledTree* tree_ = nullptr;
  std::vector<std::vector<NodeId>> up_;  // up_[k][v] = 2^k-th ancestor or kNoNode
  std::vector<NodeId> euler_nodes_;
  std::vector<std::uint32_t> first_occ_;
  RmqIndex euler_rmq_;
  FlatMap64 child_map_;
};

}  // namespace treelce
