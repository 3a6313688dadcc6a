#pragma once

#include <cstdint>
#include <vector>

#include "treelce/common.hpp"
#include "treelce/tree.hpp"

namespace treelce {

/// Difference cover over tree depths: at most 2n/x marked nodes such that any
/// two nodes at depth >= x^2 have marked d-th ancestors for a common d < x^2,
/// computable arithmetically. Marking depends only on depth mod x^2.
class DiffCover {
 public:
  DiffCover() = default;

  /// Chooses the residues minimizing the class sizes (smallest residue on
  /// ties) and materializes the marked set. Requires x >= 2.
  void build(const LabeledTree& tree, std::int64_t x);

  std::int64_t x() const { return x_; }
  std::int64_t r1() const { return r1_; }
  std::int64_t r2() const { return r2_; }
  std::int64_t marked_count() const { return marked_count_; }

  bool is_marked(NodeId v) const { return marked_[v] != 0; }
  bool type1_at_depth(std::int64_t d) const { return d % x_ == r1_; }
  bool type2_at_depth(std::int64_t d) const { return (d / x_) % x_ == r2_; }
  bool marked_at_depth(std::int64_t d) const { return type1_at_depth(d) || type2_at_depth(d); }

  /// d < x^2 such that the d-th ancestor of u is type-I marked and the d-th
  /// ancestor of v is type-II marked. Requires depth(u), depth(v) >= x^2.
  std::int64_t find_d(NodeId u, NodeId v) const;

  /// The arithmetic core of find_d, usable with explicit parameters.
  static std::int64_t find_d_raw(std::int64_t x, std::int64_t r1, std::int64_t r2,
                                 std::int64_t depth_u, std::int64_t depth_v);

 private:
  const LabeledTree* tree_ = nullptr;
  std::int64_t x_ = 0;
  std::int64_t r1_ = 0;
  std::int64_t r2_ = 0;
  std::int64_t marked_count_ = 0;
  std::vector<std::uint8_t> marked_;
};

}  // namespace treelce
