#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "treelce/common.hpp"
#include "treelce/context.hpp"
#include "treelce/diff_cover.hpp"
#include "treelce/lce_pp.hpp"
#include "treelce/oracle.hpp"

namespace treelce {

struct PtConfig {
  IndexMode mode = IndexMode::kSimple;
  std::int64_t b0 = 64;  // recursion floor; below this the base walk is cheap
};

/// Path of length `len` ending at `path_end` (top implied), matched against
/// the subtree rooted at `root`.
struct PtQuery {
  NodeId path_end = kNoNode;
  std::int64_t len = 0;
  NodeId root = kNoNode;
};

struct PtReduceOutcome {
  std::int64_t consumed = 0;  // symbols matched in front of the residual
  PtQuery residual;           // residual.len <= block length of the level
};

/// Path-tree LCE index: per-level block tables detect whole-block matches,
/// canonical-path predecessor lists bound the answer to one block, and a
/// contracted tree carries the compact mode, as in the path-path index.
class PtIndex {
 public:
  PtIndex() = default;

  void build(const TreeContext& ctx, const PtConfig& config = {});

  LcePtResult query(NodeId v1, NodeId w1, NodeId v2, QueryStats* stats = nullptr) const;

  struct Level {
    std::int64_t b = 0;         // nominal level parameter
    std::int64_t capacity = 0;  // maximum query length this level can receive
    std::int64_t x = 0;         // cover parameter, ~b^{2/5}
    std::int64_t block = 0;     // x^2, the reduction target
    std::int64_t max_i = 0;     // canonical lengths i * block, i = 1..max_i
    bool active = false;
    DiffCover cover;
    FlatMapPath block_table;  // (start node, name of length-`block` path) -> endpoint

    // Canonical paths (end node, i) sorted by their block-name sequences.
    std::vector<std::pair<NodeId, std::uint32_t>> canon;
    FlatMap64 canon_pos;                // (end node, i) -> global position
    std::vector<std::int64_t> adj_blocks;  // neighbour LCPs in whole blocks
    RmqIndex rmq;
    std::vector<std::uint32_t> local_start;  // per start node, CSR into local_pos
    std::vector<std::uint32_t> local_pos;    // ascending global positions
  };

  const std::vector<Level>& levels() const { return levels_; }
  std::int64_t base_bound() const { return base_bound_; }
  std::int64_t base_block() const { return base_block_; }

  /// One reduction step (exposed for tests): consumes matched symbols and
  /// returns a residual of length at most the level's block.
  PtReduceOutcome reduce_level(std::size_t level, const PtQuery& q, QueryStats* stats) const;

  /// Exact path-tree LCE by block hops plus child steps; returns the matched
  /// length and the node reached in the subtree.
  std::pair<std::int64_t, NodeId> base_walk(const PtQuery& q, QueryStats* stats) const;

  const LabeledTree* contracted_tree() const;

 private:
  struct Contraction {
    std::int64_t bstar = 0;
    std::int64_t block = 0;
    DiffCover cover;
    FlatMapPath block_table;  // length-block paths of T, for the entry check
    LabeledTree ctree;
    std::vector<NodeId> to_contracted;
    std::vector<NodeId> from_contracted;
    TreeContext cctx;
    std::unique_ptr<PtIndex> inner;
  };

  void build_level(Level& level) const;
  void build_block_table(FlatMapPath& table, std::int64_t block) const;
  std::pair<std::int64_t, NodeId> run_simple(const PtQuery& q, QueryStats* stats) const;
  std::pair<std::int64_t, NodeId> run_compact(const PtQuery& q, QueryStats* stats) const;

  const TreeContext* ctx_ = nullptr;
  PtConfig config_;
  std::vector<Level> levels_;
  std::int64_t base_bound_ = 0;
  std::int64_t base_block_ = 8;
  FlatMapPath base_table_;  // length-base_block_ paths
  std::unique_ptr<Contraction> contraction_;
};

}  // namespace treelce
