#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "treelce/common.hpp"
#include "treelce/oracle.hpp"
#include "treelce/tree.hpp"

namespace treelce {

struct Cluster {
  std::vector<NodeId> edges;     // each edge named by its lower endpoint
  std::vector<NodeId> nodes;     // endpoints of the edges, sorted
  std::vector<NodeId> boundary;  // nodes adjacent to the rest of the tree, <= 2
};

/// Edge-disjoint partition of the tree into connected clusters, each with at
/// most two boundary nodes; cluster count O(tau) and size O(n/tau).
class ClusterPartition {
 public:
  ClusterPartition() = default;

  /// Bottom-up greedy merge with a single deferred boundary per pending
  /// group. Requires n > 1 and 1 <= tau <= n.
  void build(const LabeledTree& tree, std::int64_t tau);

  std::int64_t tau() const { return tau_; }
  const std::vector<Cluster>& clusters() const { return clusters_; }
  bool is_boundary(NodeId v) const { return boundary_of_[v] != kNoPos; }
  std::uint32_t boundary_index(NodeId v) const { return boundary_of_[v]; }
  const std::vector<NodeId>& boundary_nodes() const { return boundary_nodes_; }

  /// Clusters containing v (one for interior nodes, several for boundaries).
  const std::vector<std::uint32_t>& clusters_of(NodeId v) const { return membership_[v]; }

 private:
  void emit(const LabeledTree& tree, std::vector<NodeId>&& edges);

  std::int64_t tau_ = 0;
  std::vector<Cluster> clusters_;
  std::vector<std::uint32_t> boundary_of_;  // node -> boundary index or kNoPos
  std::vector<NodeId> boundary_nodes_;
  std::vector<std::vector<std::uint32_t>> membership_;
};

/// Tree-tree LCE with an O(n * tau) answer table: every (node, boundary) pair
/// stores its exact LCE and realizing endpoints; queries run a cluster-local
/// parallel traversal that short-circuits through the table at boundaries.
class TtIndex {
 public:
  TtIndex() = default;

  void build(const LabeledTree& tree, std::int64_t tau);

  LceTtResult query(NodeId v1, NodeId v2, QueryStats* stats = nullptr) const;

  const ClusterPartition& partition() const { return partition_; }
  std::int64_t tau() const { return tau_; }
  std::size_t table_entries() const { return table_.size(); }

  /// Stored answer for (node, boundary); exposed for the build invariants.
  LceTtResult table_entry(NodeId v, NodeId boundary) const;

 private:
  struct Entry {
    std::int64_t len;
    NodeId e1, e2;
  };

  Entry descend(NodeId x0, NodeId y0, QueryStats* stats) const;
  Entry lookup(NodeId node, NodeId boundary) const;

  const LabeledTree* tree_ = nullptr;
  std::int64_t tau_ = 0;
  ClusterPartition partition_;
  std::vector<Entry> table_;  // row-major: node * boundary_count + boundary_index
};

/// Depth-2 tree encoding a set family: one child of the root per set, one
/// grandchild per element. Intersection of two sets reads off LCE_TT of
/// their set nodes (1 iff intersecting, 0 iff disjoint).
struct SetFamilyTree {
  LabeledTree tree;
  SymbolTable symbols;
  std::vector<NodeId> set_node;  // family index -> node
};

SetFamilyTree family_to_tree(const std::vector<std::vector<std::int64_t>>& sets);

/// True iff sets i and j are disjoint, answered through a TtIndex built over
/// family_to_tree output.
bool disjoint(const TtIndex& idx, const SetFamilyTree& fam, std::size_t i, std::size_t j,
              QueryStats* stats = nullptr);

}  // namespace treelce
