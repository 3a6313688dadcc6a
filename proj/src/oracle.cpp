#include "treelce/oracle.hpp"

#include <algorithm>
#include <array>
#include <random>

namespace treelce {
namespace oracle {
namespace {

bool naive_is_ancestor(const LabeledTree& tree, NodeId u, NodeId v) {
  NodeId cur = v;
  while (cur != kNoNode) {
    if (cur == u) return true;
    cur = tree.parent[cur];
  }
  return false;
}

// Labels of v1 ~> w1 top-down, collected by a parent walk.
std::vector<Symbol> walk_symbols(const LabeledTree& tree, NodeId v, NodeId w) {
  std::vector<Symbol> out;
  NodeId cur = w;
  while (cur != v) {
    out.push_back(tree.label[cur]);
    cur = tree.parent[cur];
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Node on v ~> w at distance k below v.
NodeId node_at(const LabeledTree& tree, NodeId v, NodeId w, std::int64_t k) {
  std::int64_t len = tree.depth[w] - tree.depth[v];
  NodeId cur = w;
  for (std::int64_t i = 0; i < len - k; ++i) cur = tree.parent[cur];
  return cur;
}

}  // namespace

LceResult lce_pp(const LabeledTree& tree, NodeId v1, NodeId w1, NodeId v2, NodeId w2) {
  tree.require_node(v1);
  tree.require_node(w1);
  tree.require_node(v2);
  tree.require_node(w2);
  if (!naive_is_ancestor(tree, v1, w1) || !naive_is_ancestor(tree, v2, w2))
    throw PreconditionError("path endpoints violate ancestry");
  std::vector<Symbol> a = walk_symbols(tree, v1, w1);
  std::vector<Symbol> b = walk_symbols(tree, v2, w2);
  std::int64_t len = 0;
  while (len < static_cast<std::int64_t>(std::min(a.size(), b.size())) &&
         a[static_cast<std::size_t>(len)] == b[static_cast<std::size_t>(len)])
    ++len;
  return LceResult{len, node_at(tree, v1, w1, len), node_at(tree, v2, w2, len)};
}

LcePtResult lce_pt(const LabeledTree& tree, NodeId v1, NodeId w1, NodeId v2) {
  tree.require_node(v1);
  tree.require_node(w1);
  tree.require_node(v2);
  if (!naive_is_ancestor(tree, v1, w1))
    throw PreconditionError("path endpoints violate ancestry");
  std::vector<Symbol> a = walk_symbols(tree, v1, w1);
  NodeId cur = v2;
  std::int64_t len = 0;
  for (Symbol sym : a) {
    NodeId next = kNoNode;
    for (auto [cs, c] : tree.children[cur])  // linear scan on purpose
      if (cs == sym) next = c;
    if (next == kNoNode) break;
    cur = next;
    ++len;
  }
  return LcePtResult{len, node_at(tree, v1, w1, len), cur};
}

LceTtResult lce_tt(const LabeledTree& tree, NodeId v1, NodeId v2) {
  tree.require_node(v1);
  tree.require_node(v2);
  // Preorder ranks for the tie rule, computed locally.
  std::vector<std::uint32_t> pre(static_cast<std::size_t>(tree.n), 0);
  {
    std::uint32_t clock = 0;
    std::vector<NodeId> stack{0};
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      pre[v] = clock++;
      const auto& cs = tree.children[v];
      for (auto it = cs.rbegin(); it != cs.rend(); ++it) stack.push_back(it->second);
    }
  }

  LceTtResult best{0, v1, v2};
  // Matched-child parallel DFS; each visited pair is unique per path string.
  std::vector<std::array<NodeId, 2>> stack{{v1, v2}};
  std::vector<std::int64_t> dist{0};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    std::int64_t t = dist.back();
    dist.pop_back();
    if (t > best.length ||
        (t == best.length &&
         std::make_pair(pre[x], pre[y]) < std::make_pair(pre[best.end1], pre[best.end2]))) {
      best = LceTtResult{t, x, y};
    }
    const auto& cx = tree.children[x];
    const auto& cy = tree.children[y];
    std::size_t i = 0, j = 0;
    while (i < cx.size() && j < cy.size()) {
      if (cx[i].first == cy[j].first) {
        stack.push_back({cx[i].second, cy[j].second});
        dist.push_back(t + 1);
        ++i;
        ++j;
      } else if (cx[i].first < cy[j].first) {
        ++i;
      } else {
        ++j;
      }
    }
  }
  return best;
}

std::int64_t subtree_height(const LabeledTree& tree, NodeId v) {
  std::int64_t best = 0;
  std::vector<std::pair<NodeId, std::int64_t>> stack{{v, 0}};
  while (!stack.empty()) {
    auto [x, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    for (auto [s, c] : tree.children[x]) stack.push_back({c, d + 1});
  }
  return best;
}

}  // namespace oracle

TreeShape shape_from_name(const std::string& name) {
  if (name == "random") return TreeShape::kRandom;
  if (name == "path") return TreeShape::kPath;
  if (name == "caterpillar") return TreeShape::kCaterpillar;
  if (name == "binary") return TreeShape::kBinary;
  if (name == "star") return TreeShape::kStar;
  throw ParseError("unknown tree shape '" + name + "'");
}

const char* shape_name(TreeShape s) {
  switch (s) {
    case TreeShape::kRandom: return "random";
    case TreeShape::kPath: return "path";
    case TreeShape::kCaterpillar: return "caterpillar";
    case TreeShape::kBinary: return "binary";
    case TreeShape::kStar: return "star";
  }
  return "?";
}

namespace {

// Tokens whose byte order matches numeric order, so symbol ids equal the
// generated label values.
std::vector<std::string> alphabet_tokens(std::int64_t sigma) {
  std::vector<std::string> tokens;
  tokens.reserve(static_cast<std::size_t>(sigma));
  if (sigma <= 26) {
    for (std::int64_t i = 0; i < sigma; ++i) tokens.push_back(std::string(1, char('a' + i)));
    return tokens;
  }
  int width = 1;
  std::int64_t cap = 10;
  while (cap < sigma) {
    cap *= 10;
    ++width;
  }
  for (std::int64_t i = 0; i < sigma; ++i) {
    std::string digits = std::to_string(i);
    tokens.push_back("s" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') +
                     digits);
  }
  return tokens;
}

}  // namespace

GenResult gen_random_tree(const GenSpec& spec) {
  if (spec.n < 1) throw PreconditionError("n must be at least 1");
  if (spec.sigma < 1) throw PreconditionError("sigma must be at least 1");
  std::mt19937_64 rng(spec.seed ^ (0xabcdULL * static_cast<std::uint64_t>(spec.shape)));
  auto rnd_label = [&](std::int64_t bound) {
    return static_cast<Symbol>(rng() % static_cast<std::uint64_t>(bound));
  };

  LabeledTree raw;
  raw.n = spec.n;
  raw.parent.assign(static_cast<std::size_t>(spec.n), kNoNode);
  raw.label.assign(static_cast<std::size_t>(spec.n), kNoSymbol);
  auto attach = [&](std::int64_t child, std::int64_t par, Symbol sym) {
    raw.parent[static_cast<std::size_t>(child)] = static_cast<NodeId>(par);
    raw.label[static_cast<std::size_t>(child)] = sym;
  };

  switch (spec.shape) {
    case TreeShape::kRandom:
      for (std::int64_t v = 1; v < spec.n; ++v)
        attach(v, static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(v)),
               rnd_label(spec.sigma));
      break;
    case TreeShape::kPath:
      for (std::int64_t v = 1; v < spec.n; ++v) attach(v, v - 1, rnd_label(spec.sigma));
      break;
    case TreeShape::kCaterpillar: {
      // Spine grows on odd steps, a leg hangs off the spine end on even ones.
      std::int64_t spine = 0;
      for (std::int64_t v = 1; v < spec.n; ++v) {
        attach(v, spine, rnd_label(spec.sigma));
        if (v % 2 == 1) spine = v;
      }
      break;
    }
    case TreeShape::kBinary:
      for (std::int64_t v = 1; v < spec.n; ++v) {
        Symbol sym;
        if (spec.sigma >= 2) {
          // Left/right edges get distinct symbols so the shape survives
          // normalization whenever the alphabet allows it.
          sym = static_cast<Symbol>((v - 1) % 2 == 0 ? rnd_label(spec.sigma / 2)
                                                     : spec.sigma / 2 + rnd_label(spec.sigma - spec.sigma / 2));
        } else {
          sym = 0;
        }
        attach(v, (v - 1) / 2, sym);
      }
      break;
    case TreeShape::kStar:
      for (std::int64_t v = 1; v < spec.n; ++v)
        attach(v, 0, static_cast<Symbol>((v - 1) % spec.sigma));
      break;
  }
  raw.finalize();

  NormalizeResult norm = normalize(raw);
  GenResult res;
  res.requested_n = spec.n;
  res.tree = std::move(norm.tree);

  std::vector<std::string> all = alphabet_tokens(spec.sigma);
  std::vector<std::string> used;
  for (std::int64_t v = 1; v < res.tree.n; ++v)
    used.push_back(all[static_cast<std::size_t>(res.tree.label[static_cast<std::size_t>(v)])]);
  // Remap labels onto the dense alphabet actually used.
  SymbolTable table = SymbolTable::from_tokens(used);
  for (std::int64_t v = 1; v < res.tree.n; ++v) {
    std::size_t sv = static_cast<std::size_t>(v);
    res.tree.label[sv] = table.id_of(all[static_cast<std::size_t>(res.tree.label[sv])]);
  }
  res.tree.finalize();
  res.symbols = std::move(table);
  return res;
}

}  // namespace treelce
