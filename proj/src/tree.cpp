#include "treelce/tree.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

namespace treelce {

SymbolTable SymbolTable::from_tokens(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  SymbolTable t;
  t.tokens_ = std::move(tokens);
  t.ids_.reserve(t.tokens_.size());
  for (std::size_t i = 0; i < t.tokens_.size(); ++i)
    t.ids_.emplace(t.tokens_[i], static_cast<Symbol>(i));
  return t;
}

Symbol SymbolTable::id_of(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kNoSymbol : it->second;
}

const std::string& SymbolTable::token(Symbol s) const {
  if (s < 0 || s >= static_cast<Symbol>(tokens_.size()))
    throw PreconditionError("unknown symbol id " + std::to_string(s));
  return tokens_[static_cast<std::size_t>(s)];
}

void LabeledTree::require_node(NodeId v) const {
  if (!valid_node(v)) throw PreconditionError("unknown node id " + std::to_string(v));
}

void LabeledTree::finalize() {
  const std::size_t nn = static_cast<std::size_t>(n);
  if (nn == 0 || parent.size() != nn || label.size() != nn)
    throw ParseError("inconsistent tree arrays");
  if (parent[0] != kNoNode) throw ParseError("root is 0 and must have no parent");

  children.assign(nn, {});
  for (std::size_t v = 1; v < nn; ++v) {
    if (parent[v] >= nn) throw ParseError("node " + std::to_string(v) + " has invalid parent");
    children[parent[v]].push_back({label[v], static_cast<NodeId>(v)});
  }
  for (auto& cs : children) std::sort(cs.begin(), cs.end());

  depth.assign(nn, -1);
  euler_in.assign(nn, 0);
  euler_out.assign(nn, 0);
  std::uint32_t clock = 0;
  // Iterative DFS; frame second = next child index.
  std::vector<std::pair<NodeId, std::size_t>> stack;
  stack.reserve(64);
  depth[0] = 0;
  euler_in[0] = clock++;
  stack.push_back({0, 0});
  std::size_t visited = 1;
  while (!stack.empty()) {
    auto& [v, ci] = stack.back();
    if (ci == children[v].size()) {
      euler_out[v] = clock++;
      stack.pop_back();
      continue;
    }
    NodeId c = children[v][ci++].second;
    if (depth[c] != -1) throw ParseError("cycle through node " + std::to_string(c));
    depth[c] = depth[v] + 1;
    euler_in[c] = clock++;
    ++visited;
    stack.push_back({c, 0});
  }
  if (visited != nn) throw ParseError("disconnected node (not reachable from the root)");
}

bool LabeledTree::is_ancestor(NodeId u, NodeId v) const {
  require_node(u);
  require_node(v);
  return euler_in[u] <= euler_in[v] && euler_out[v] <= euler_out[u];
}

NodeId LabeledTree::child_by_symbol(NodeId v, Symbol s) const {
  require_node(v);
  const auto& cs = children[v];
  auto it = std::lower_bound(cs.begin(), cs.end(), std::make_pair(s, NodeId(0)));
  if (it != cs.end() && it->first == s) return it->second;
  return kNoNode;
}

bool LabeledTree::has_duplicate_sibling_labels() const {
  for (const auto& cs : children)
    for (std::size_t i = 1; i < cs.size(); ++i)
      if (cs[i].first == cs[i - 1].first) return true;
  return false;
}

std::int64_t LabeledTree::max_depth() const {
  std::int64_t m = 0;
  for (std::int64_t d : depth) m = std::max(m, d);
  return m;
}

PathRef make_path(const LabeledTree& tree, NodeId top, NodeId bottom) {
  if (!tree.is_ancestor(top, bottom))
    throw PreconditionError("node " + std::to_string(top) + " is not an ancestor of " +
                            std::to_string(bottom));
  return PathRef{top, bottom, tree.depth[bottom] - tree.depth[top]};
}

std::vector<Symbol> path_symbols(const LabeledTree& tree, const PathRef& path) {
  if (!tree.is_ancestor(path.top, path.bottom))
    throw PreconditionError("invalid path reference");
  std::vector<Symbol> out(static_cast<std::size_t>(path.length));
  NodeId v = path.bottom;
  for (std::int64_t i = path.length - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = tree.label[v];
    v = tree.parent[v];
  }
  return out;
}

NormalizeResult normalize(const LabeledTree& tree) {
  const std::size_t nn = static_cast<std::size_t>(tree.n);

  // Partition refinement: a class is a set of old nodes merged into one new
  // node. Children of a class grouped by symbol form the next classes, so
  // merges cascade to a fixed point in one pass.
  std::vector<std::vector<NodeId>> members;
  members.push_back({0});
  struct Edge {
    std::uint32_t from_class;
    Symbol sym;
    std::uint32_t to_class;
  };
  std::vector<Edge> edges;
  bool changed = false;

  for (std::uint32_t c = 0; c < members.size(); ++c) {
    std::vector<std::pair<Symbol, NodeId>> kids;
    for (NodeId old : members[c])
      for (auto [sym, ch] : tree.children[old]) kids.push_back({sym, ch});
    std::sort(kids.begin(), kids.end());
    std::size_t i = 0;
    while (i < kids.size()) {
      std::size_t j = i;
      std::vector<NodeId> group;
      while (j < kids.size() && kids[j].first == kids[i].first) group.push_back(kids[j++].second);
      if (group.size() > 1) changed = true;
      std::uint32_t nc = static_cast<std::uint32_t>(members.size());
      edges.push_back({c, kids[i].first, nc});
      members.push_back(std::move(group));
      i = j;
    }
  }

  // New ids: classes ordered by their smallest old member. With no merging
  // anywhere this reduces to the identity.
  const std::uint32_t num_classes = static_cast<std::uint32_t>(members.size());
  std::vector<std::uint32_t> order(num_classes);
  for (std::uint32_t c = 0; c < num_classes; ++c) order[c] = c;
  std::vector<NodeId> min_member(num_classes);
  for (std::uint32_t c = 0; c < num_classes; ++c)
    min_member[c] = *std::min_element(members[c].begin(), members[c].end());
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return min_member[a] < min_member[b]; });
  std::vector<NodeId> class_to_new(num_classes);
  for (std::uint32_t i = 0; i < num_classes; ++i) class_to_new[order[i]] = i;

  NormalizeResult res;
  res.changed = changed;
  res.tree.n = num_classes;
  res.tree.parent.assign(num_classes, kNoNode);
  res.tree.label.assign(num_classes, kNoSymbol);
  for (const Edge& e : edges) {
    res.tree.parent[class_to_new[e.to_class]] = class_to_new[e.from_class];
    res.tree.label[class_to_new[e.to_class]] = e.sym;
  }
  res.tree.finalize();
  res.remap.assign(nn, kNoNode);
  for (std::uint32_t c = 0; c < num_classes; ++c)
    for (NodeId old : members[c]) res.remap[old] = class_to_new[c];
  return res;
}

namespace {

struct RawEdge {
  std::int64_t parent, child;
  std::string token;
  std::int64_t line;
};

std::int64_t parse_int(std::string_view s, std::int64_t line, const char* what) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError(std::string("malformed ") + what + " '" + std::string(s) + "'", line);
  return v;
}

}  // namespace

ParseResult parse_tree(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
    if (nl == text.size()) break;
  }
  auto fields = [](std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      if (j > i) out.push_back(line.substr(i, j - i));
      i = j;
    }
    return out;
  };

  std::size_t li = 0;
  while (li < lines.size() && fields(lines[li]).empty()) ++li;
  if (li == lines.size()) throw ParseError("empty tree file");
  auto head = fields(lines[li]);
  if (head.size() != 1) throw ParseError("expected node count on the first line", li + 1);
  std::int64_t n = parse_int(head[0], li + 1, "node count");
  if (n < 1) throw ParseError("node count must be at least 1", li + 1);
  ++li;

  std::vector<RawEdge> raw;
  raw.reserve(static_cast<std::size_t>(n - 1));
  for (; li < lines.size(); ++li) {
    auto f = fields(lines[li]);
    if (f.empty()) continue;
    if (f.size() != 3) throw ParseError("expected 'parent child label'", li + 1);
    RawEdge e;
    e.parent = parse_int(f[0], li + 1, "parent id");
    e.child = parse_int(f[1], li + 1, "child id");
    e.token = std::string(f[2]);
    e.line = static_cast<std::int64_t>(li + 1);
    raw.push_back(std::move(e));
  }
  if (static_cast<std::int64_t>(raw.size()) != n - 1)
    throw ParseError("expected " + std::to_string(n - 1) + " edge lines, found " +
                     std::to_string(raw.size()));

  std::vector<std::string> tokens;
  tokens.reserve(raw.size());
  for (const RawEdge& e : raw) tokens.push_back(e.token);
  SymbolTable symbols = SymbolTable::from_tokens(std::move(tokens));

  LabeledTree t;
  t.n = n;
  t.parent.assign(static_cast<std::size_t>(n), kNoNode);
  t.label.assign(static_cast<std::size_t>(n), kNoSymbol);
  for (const RawEdge& e : raw) {
    if (e.parent < 0 || e.parent >= n) throw ParseError("parent id out of range", e.line);
    if (e.child < 1 || e.child >= n) {
      if (e.child == 0) throw ParseError("root is 0 and cannot be a child", e.line);
      throw ParseError("child id out of range", e.line);
    }
    if (t.parent[static_cast<std::size_t>(e.child)] != kNoNode)
      throw ParseError("node " + std::to_string(e.child) + " has multiple parents", e.line);
    t.parent[static_cast<std::size_t>(e.child)] = static_cast<NodeId>(e.parent);
    t.label[static_cast<std::size_t>(e.child)] = symbols.id_of(e.token);
  }
  for (std::int64_t v = 1; v < n; ++v)
    if (t.parent[static_cast<std::size_t>(v)] == kNoNode)
      throw ParseError("node " + std::to_string(v) + " is disconnected (no parent edge)");
  t.finalize();

  ParseResult res;
  NormalizeResult norm = normalize(t);
  res.tree = std::move(norm.tree);
  res.symbols = std::move(symbols);
  if (norm.changed) res.remap = std::move(norm.remap);
  return res;
}

std::string serialize_tree(const LabeledTree& tree, const SymbolTable& symbols) {
  std::ostringstream out;
  out << tree.n << '\n';
  for (std::int64_t v = 1; v < tree.n; ++v) {
    std::size_t sv = static_cast<std::size_t>(v);
    out << tree.parent[sv] << ' ' << v << ' ' << symbols.token(tree.label[sv]) << '\n';
  }
  return out.str();
}

TrieResult build_trie(const std::vector<std::vector<std::string>>& strings) {
  if (strings.empty()) throw PreconditionError("empty string family");
  bool any = false;
  for (const auto& s : strings) any = any || !s.empty();
  if (!any) throw PreconditionError("all input strings are empty");

  std::vector<std::string> tokens;
  for (const auto& s : strings)
    for (const auto& tok : s) tokens.push_back(tok);
  SymbolTable symbols = SymbolTable::from_tokens(std::move(tokens));

  std::vector<NodeId> parent{kNoNode};
  std::vector<Symbol> label{kNoSymbol};
  // edge map (node, symbol) -> child, discovered in input order
  FlatMap64 edge;
  std::vector<NodeId> leaf_of;
  leaf_of.reserve(strings.size());
  for (const auto& s : strings) {
    NodeId cur = 0;
    for (const auto& tok : s) {
      Symbol sym = symbols.id_of(tok);
      std::uint64_t key = (std::uint64_t(cur) << 32) | std::uint32_t(sym);
      std::uint32_t next = edge.find(key);
      if (next == kNoPos) {
        next = static_cast<std::uint32_t>(parent.size());
        parent.push_back(cur);
        label.push_back(sym);
        edge.insert(key, next);
      }
      cur = next;
    }
    leaf_of.push_back(cur);
  }

  TrieResult res;
  res.tree.n = static_cast<std::int64_t>(parent.size());
  res.tree.parent = std::move(parent);
  res.tree.label = std::move(label);
  res.tree.finalize();
  res.symbols = std::move(symbols);
  res.leaf_of = std::move(leaf_of);
  return res;
}

std::vector<std::string> split_tokens(std::string_view line, std::string_view sep) {
  std::vector<std::string> out;
  if (sep.empty()) {
    for (char c : line) out.push_back(std::string(1, c));
    return out;
  }
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      if (pos < line.size()) out.push_back(std::string(line.substr(pos)));
      break;
    }
    if (next > pos) out.push_back(std::string(line.substr(pos, next - pos)));
    pos = next + sep.size();
  }
  return out;
}

}  // namespace treelce
