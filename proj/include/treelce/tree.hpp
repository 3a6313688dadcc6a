#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treelce/common.hpp"

namespace treelce {

/// Alphabet of edge tokens. Symbol ids are dense 0..sigma-1, assigned in
/// ascending byte-lexicographic token order, which fixes every
/// "lexicographic" order used downstream.
class SymbolTable {
 public:
  SymbolTable() = default;

  /// Builds the table from an arbitrary token collection (duplicates fine).
  static SymbolTable from_tokens(std::vector<std::string> tokens);

  Symbol id_of(std::string_view token) const;
  const std::string& token(Symbol s) const;
  std::int64_t size() const { return static_cast<std::int64_t>(tokens_.size()); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Symbol> ids_;
};

/// Edge-labeled rooted tree. Node ids are dense 0..n-1 with root 0. label[v]
/// is the symbol on the edge from parent[v] to v (kNoSymbol at the root).
/// Immutable once finalized; all query structures share one instance.
struct LabeledTree {
  std::int64_t n = 0;
  std::vector<NodeId> parent;   // parent[0] == kNoNode
  std::vector<Symbol> label;    // label[0] == kNoSymbol
  std::vector<std::int64_t> depth;
  std::vector<std::vector<std::pair<Symbol, NodeId>>> children;  // ascending by symbol
  std::vector<std::uint32_t> euler_in, euler_out;

  /// Rebuilds children lists, depths and euler intervals from parent/label
  /// and validates the structure (single root 0, acyclic, connected).
  void finalize();

  bool valid_node(NodeId v) const { return v < static_cast<NodeId>(n); }
  void require_node(NodeId v) const;

  /// True iff u lies on the root path of v (u == v included).
  bool is_ancestor(NodeId u, NodeId v) const;

  /// Unique child of v along symbol s, or kNoNode. Binary search over the
  /// sorted children list; the hashed variant lives in PrimitivesIndex.
  NodeId child_by_symbol(NodeId v, Symbol s) const;

  bool has_duplicate_sibling_labels() const;
  std::int64_t max_depth() const;
};

/// Downward path top ~> bottom, read top-down. length == depth(bottom) - depth(top).
struct PathRef {
  NodeId top = 0;
  NodeId bottom = 0;
  std::int64_t length = 0;
};

/// Validates ancestry and builds a PathRef.
PathRef make_path(const LabeledTree& tree, NodeId top, NodeId bottom);

/// Top-down label sequence of the path, length == path.length.
std::vector<Symbol> path_symbols(const LabeledTree& tree, const PathRef& path);

struct NormalizeResult {
  LabeledTree tree;
  std::vector<NodeId> remap;  // old id -> new id
  bool changed = false;
};

/// Merges children reachable from one node by equal-label edges, recursively
/// until all sibling labels are distinct. Root-to-node strings of mapped
/// nodes are preserved, so LCE answers are unchanged.
NormalizeResult normalize(const LabeledTree& tree);

struct ParseResult {
  LabeledTree tree;
  SymbolTable symbols;
  std::optional<std::vector<NodeId>> remap;  // present iff normalization merged
};

/// Parses the text tree format: line 1 is n, then n-1 lines
/// "parent child label". Returns the normalized tree.
ParseResult parse_tree(std::string_view text);

/// Inverse of parse_tree on normalized trees (modulo formatting).
std::string serialize_tree(const LabeledTree& tree, const SymbolTable& symbols);

struct TrieResult {
  LabeledTree tree;
  SymbolTable symbols;
  std::vector<NodeId> leaf_of;  // input string index -> node ending its path
};

/// Trie of the given token sequences: shared prefixes merged maximally, one
/// symbol per edge. At least one nonempty string is required.
TrieResult build_trie(const std::vector<std::vector<std::string>>& strings);

/// Splits a line into tokens: single bytes when sep is empty, else on sep.
std::vector<std::string> split_tokens(std::string_view line, std::string_view sep);

}  // namespace treelce
