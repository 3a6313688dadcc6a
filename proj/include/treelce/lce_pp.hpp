#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "treelce/common.hpp"
#include "treelce/context.hpp"
#include "treelce/diff_cover.hpp"
#include "treelce/naming.hpp"
#include "treelce/oracle.hpp"

namespace treelce {

enum class IndexMode { kSimple, kCompact };

struct PpConfig {
  IndexMode mode = IndexMode::kSimple;
  std::int64_t b0 = 4;  // recursion floor of the level parameters
};

/// Equal-length pair of downward paths, each given by its end node; the tops
/// are the ancestors `len` levels up.
struct PpQuery {
  NodeId end1 = kNoNode;
  NodeId end2 = kNoNode;
  std::int64_t len = 0;
};

/// One level either answers the query or reduces it; the caller adds
/// `consumed` matched symbols in front of whatever the residual yields.
struct PpReduceOutcome {
  std::optional<std::int64_t> answer;
  std::int64_t consumed = 0;
  PpQuery residual;
};

/// Path-path LCE index: a stack of difference-cover reduction levels, either
/// directly on the tree (simple mode) or on a contracted block tree
/// (compact mode), finished by a short name-guided walk.
class PpIndex {
 public:
  PpIndex() = default;

  void build(const TreeContext& ctx, const PpConfig& config = {});

  LceResult query(NodeId v1, NodeId w1, NodeId v2, NodeId w2,
                  QueryStats* stats = nullptr) const;

  struct Level {
    std::int64_t b = 0;
    std::int64_t x = 0;
    bool active = false;  // x^2 < b; inactive levels pass queries through
    DiffCover cover;
    std::vector<SortedPathList> lists;  // k-th list: paths of length x^2 * 2^k
  };

  const std::vector<Level>& levels() const { return levels_; }
  std::int64_t base_bound() const { return base_bound_; }
  const PpConfig& config() const { return config_; }

  /// Applies one level to an equal-length query (exposed for tests).
  PpReduceOutcome reduce_level(std::size_t level, const PpQuery& q, QueryStats* stats) const;

  /// Exact LCE of an equal-length pair by block-name hops plus symbol steps.
  std::int64_t base_walk(const PpQuery& q, QueryStats* stats) const;

  /// Compact mode only: the contracted tree (marked nodes, block edges).
  const LabeledTree* contracted_tree() const;
  const PpIndex* inner_index() const;

 private:
  // Heap-allocated because cctx and inner point back into it; the index must
  // stay movable without invalidating them.
  struct Contraction {
    std::int64_t bstar = 0;
    std::int64_t block = 0;  // bstar^2
    DiffCover cover;
    LabeledTree ctree;
    std::vector<NodeId> to_contracted;  // marked T node -> T' id
    TreeContext cctx;
    std::unique_ptr<PpIndex> inner;
  };

  std::int64_t query_len(const PpQuery& q, QueryStats* stats) const;
  std::int64_t query_len_compact(const PpQuery& q, QueryStats* stats) const;
  void build_levels(std::int64_t top_b);

  const TreeContext* ctx_ = nullptr;
  PpConfig config_;
  std::vector<Level> levels_;
  std::int64_t base_bound_ = 0;
  std::int64_t base_block_ = 4;
  std::unique_ptr<Contraction> contraction_;
};

/// Contracted tree shared by the compact-mode indexes: marked nodes of the
/// cover become nodes, edges stand for length-`block` paths labeled by their
/// names, and an artificial root adopts the shallow marked nodes.
struct ContractedTree {
  LabeledTree ctree;
  std::vector<NodeId> to_contracted;    // T marked node -> T' id (kNoNode elsewhere)
  std::vector<NodeId> from_contracted;  // T' id -> T node (kNoNode at the root)
};

ContractedTree build_contracted_tree(const TreeContext& ctx, const DiffCover& cover,
                                     std::int64_t block);

}  // namespace treelce
