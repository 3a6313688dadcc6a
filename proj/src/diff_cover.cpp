#include "treelce/diff_cover.hpp"

#include <algorithm>

namespace treelce {

void DiffCover::build(const LabeledTree& tree, std::int64_t x) {
  if (x < 2) throw PreconditionError("difference cover parameter x must be at least 2");
  tree_ = &tree;
  x_ = x;

  std::vector<std::int64_t> c1(static_cast<std::size_t>(x), 0);
  std::vector<std::int64_t> c2(static_cast<std::size_t>(x), 0);
  for (std::int64_t d : tree.depth) {
    ++c1[static_cast<std::size_t>(d % x)];
    ++c2[static_cast<std::size_t>((d / x) % x)];
  }
  r1_ = static_cast<std::int64_t>(std::min_element(c1.begin(), c1.end()) - c1.begin());
  r2_ = static_cast<std::int64_t>(std::min_element(c2.begin(), c2.end()) - c2.begin());

  marked_.assign(static_cast<std::size_t>(tree.n), 0);
  marked_count_ = 0;
  for (std::size_t v = 0; v < static_cast<std::size_t>(tree.n); ++v) {
    if (marked_at_depth(tree.depth[v])) {
      marked_[v] = 1;
      ++marked_count_;
    }
  }
}

std::int64_t DiffCover::find_d_raw(std::int64_t x, std::int64_t r1, std::int64_t r2,
                                   std::int64_t depth_u, std::int64_t depth_v) {
  std::int64_t d1 = ((depth_u - r1) % x + x) % x;
  std::int64_t d2 = (((depth_v - d1) / x - r2) % x + x) % x;
  return d1 + d2 * x;
}

std::int64_t DiffCover::find_d(NodeId u, NodeId v) const {
  tree_->require_node(u);
  tree_->require_node(v);
  if (tree_->depth[u] < x_ * x_ || tree_->depth[v] < x_ * x_)
    throw PreconditionError("find_d requires both depths to be at least x^2");
  return find_d_raw(x_, r1_, r2_, tree_->depth[u], tree_->depth[v]);
}

}  // namespace treelce
