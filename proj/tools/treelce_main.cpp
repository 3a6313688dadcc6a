// Command line front end: generate and ingest trees, answer LCE query
// batches, self-test against the brute-force oracles, benchmark with
// counters, and run the set-intersection demo.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "treelce/context.hpp"
#include "treelce/lce_pp.hpp"
#include "treelce/lce_pt.hpp"
#include "treelce/lce_tt.hpp"
#include "treelce/oracle.hpp"
#include "treelce/tree.hpp"

namespace {

using namespace treelce;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open output file '" + path + "'");
  out << content;
}

struct QueryLine {
  enum Kind { kPp, kPt, kTt } kind;
  NodeId ids[4];
  std::int64_t line;
};

QueryLine parse_query_line(const std::string& text, std::int64_t line_no) {
  std::istringstream ss(text);
  std::string kind;
  ss >> kind;
  QueryLine q{};
  q.line = line_no;
  int arity;
  if (kind == "PP") {
    q.kind = QueryLine::kPp;
    arity = 4;
  } else if (kind == "PT") {
    q.kind = QueryLine::kPt;
    arity = 3;
  } else if (kind == "TT") {
    q.kind = QueryLine::kTt;
    arity = 2;
  } else {
    throw ParseError("unknown query kind '" + kind + "'", line_no);
  }
  for (int i = 0; i < arity; ++i) {
    std::int64_t v;
    if (!(ss >> v) || v < 0) throw ParseError("expected node id", line_no);
    q.ids[i] = static_cast<NodeId>(v);
  }
  std::string extra;
  if (ss >> extra) throw ParseError("trailing tokens after query", line_no);
  return q;
}

std::int64_t default_tau(std::int64_t n) {
  auto t = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  return std::max<std::int64_t>(1, std::min(t, n));
}

struct Engine {
  LabeledTree tree;
  SymbolTable symbols;
  TreeContext ctx;
  PpIndex pp;
  PtIndex pt;
  TtIndex tt;

  void build(IndexMode mode, std::int64_t tau) {
    ctx.build(tree);
    pp.build(ctx, PpConfig{mode});
    pt.build(ctx, PtConfig{mode});
    tt.build(tree, tau);
  }
};

int cmd_gen(const std::string& out_path, std::int64_t n, std::int64_t sigma,
            const std::string& shape, std::uint64_t seed) {
  GenResult gen = gen_random_tree(GenSpec{n, sigma, shape_from_name(shape), seed});
  write_file(out_path, serialize_tree(gen.tree, gen.symbols));
  if (gen.tree.n != gen.requested_n)
    std::cerr << "note: normalization merged duplicate edges, n=" << gen.tree.n << " (requested "
              << gen.requested_n << ")\n";
  return 0;
}

int cmd_trie(const std::string& in_path, const std::string& out_path, const std::string& map_path,
             const std::string& sep) {
  std::string text = read_file(in_path);
  std::vector<std::vector<std::string>> strings;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    strings.push_back(split_tokens(line, sep));
  }
  TrieResult trie = build_trie(strings);
  write_file(out_path, serialize_tree(trie.tree, trie.symbols));
  if (!map_path.empty()) {
    std::ostringstream map;
    for (std::size_t i = 0; i < trie.leaf_of.size(); ++i)
      map << i << ' ' << trie.leaf_of[i] << '\n';
    write_file(map_path, map.str());
  }
  return 0;
}

int cmd_query(const std::string& tree_path, const std::string& mode_name, std::int64_t tau,
              bool print_path) {
  ParseResult parsed = parse_tree(read_file(tree_path));
  Engine eng;
  eng.tree = std::move(parsed.tree);
  eng.symbols = std::move(parsed.symbols);
  IndexMode mode = mode_name == "compact" ? IndexMode::kCompact : IndexMode::kSimple;
  if (tau <= 0) tau = default_tau(eng.tree.n);
  if (tau > eng.tree.n) tau = eng.tree.n;
  eng.build(mode, tau);

  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(std::cin, line)) {
    ++line_no;
    if (line.empty()) continue;
    QueryLine q = parse_query_line(line, line_no);
    for (int i = 0; i < 4; ++i) {
      int arity = q.kind == QueryLine::kPp ? 4 : (q.kind == QueryLine::kPt ? 3 : 2);
      if (i < arity && !eng.tree.valid_node(q.ids[i]))
        throw PreconditionError("node id out of range", line_no);
    }
    try {
      std::int64_t len;
      NodeId e1, e2, origin;
      switch (q.kind) {
        case QueryLine::kPp: {
          LceResult r = eng.pp.query(q.ids[0], q.ids[1], q.ids[2], q.ids[3]);
          len = r.length;
          e1 = r.end1;
          e2 = r.end2;
          origin = q.ids[0];
          break;
        }
        case QueryLine::kPt: {
          LcePtResult r = eng.pt.query(q.ids[0], q.ids[1], q.ids[2]);
          len = r.length;
          e1 = r.path_end;
          e2 = r.tree_end;
          origin = q.ids[0];
          break;
        }
        default: {
          LceTtResult r = eng.tt.query(q.ids[0], q.ids[1]);
          len = r.length;
          e1 = r.end1;
          e2 = r.end2;
          origin = q.ids[0];
          break;
        }
      }
      std::cout << len << ' ' << e1 << ' ' << e2;
      if (print_path) {
        std::vector<Symbol> syms =
            path_symbols(eng.tree, PathRef{origin, e1, len});
        std::string text;
        for (Symbol s : syms) text += eng.symbols.token(s);
        std::cout << ' ' << text;
      }
      std::cout << '\n';
    } catch (const PreconditionError& e) {
      throw PreconditionError(e.what(), line_no);
    }
  }
  return 0;
}

int cmd_selftest(std::int64_t n, std::int64_t sigma, std::int64_t iters, std::uint64_t seed,
                 const std::vector<std::string>& shapes) {
  std::mt19937_64 rng(seed);
  std::int64_t mismatches = 0, trees = 0, queries = 0;
  for (const std::string& shape_str : shapes) {
    GenResult gen = gen_random_tree(GenSpec{n, sigma, shape_from_name(shape_str), rng()});
    Engine eng;
    eng.tree = std::move(gen.tree);
    eng.symbols = std::move(gen.symbols);
    eng.build(IndexMode::kSimple, default_tau(eng.tree.n));
    ++trees;

    const NodeId nn = static_cast<NodeId>(eng.tree.n);
    auto random_node = [&] { return static_cast<NodeId>(rng() % nn); };
    auto random_anc = [&](NodeId w) {
      std::int64_t up = eng.tree.depth[w] == 0 ? 0 : static_cast<std::int64_t>(
          rng() % static_cast<std::uint64_t>(eng.tree.depth[w] + 1));
      NodeId v = w;
      for (std::int64_t i = 0; i < up; ++i) v = eng.tree.parent[v];
      return v;
    };
    for (std::int64_t it = 0; it < iters; ++it) {
      NodeId w1 = random_node(), w2 = random_node();
      NodeId v1 = random_anc(w1), v2 = random_anc(w2);
      LceResult pp = eng.pp.query(v1, w1, v2, w2);
      LceResult opp = oracle::lce_pp(eng.tree, v1, w1, v2, w2);
      mismatches += pp.length != opp.length || pp.end1 != opp.end1 || pp.end2 != opp.end2;
      LcePtResult pt = eng.pt.query(v1, w1, v2);
      LcePtResult opt = oracle::lce_pt(eng.tree, v1, w1, v2);
      mismatches += pt.length != opt.length || pt.path_end != opt.path_end ||
                    pt.tree_end != opt.tree_end;
      LceTtResult tt = eng.tt.query(v1, v2);
      LceTtResult ott = oracle::lce_tt(eng.tree, v1, v2);
      mismatches += tt.length != ott.length || tt.end1 != ott.end1 || tt.end2 != ott.end2;
      queries += 3;
    }
  }
  std::cout << "selftest: trees=" << trees << " queries=" << queries
            << " mismatches=" << mismatches << '\n';
  return mismatches == 0 ? 0 : 1;
}

int cmd_bench(const std::string& tree_path, const std::string& queries_path, std::int64_t repeat,
              const std::string& mode_name, std::int64_t tau) {
  ParseResult parsed = parse_tree(read_file(tree_path));
  Engine eng;
  eng.tree = std::move(parsed.tree);
  eng.symbols = std::move(parsed.symbols);
  if (tau <= 0) tau = default_tau(eng.tree.n);
  if (tau > eng.tree.n) tau = eng.tree.n;

  auto t0 = std::chrono::steady_clock::now();
  eng.build(mode_name == "compact" ? IndexMode::kCompact : IndexMode::kSimple, tau);
  auto t1 = std::chrono::steady_clock::now();
  std::cout << "build_ms " << std::chrono::duration<double, std::milli>(t1 - t0).count() << '\n';

  std::vector<QueryLine> queries;
  {
    std::istringstream ss(read_file(queries_path));
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(ss, line)) {
      ++line_no;
      if (line.empty()) continue;
      queries.push_back(parse_query_line(line, line_no));
    }
  }

  const char* names[3] = {"PP", "PT", "TT"};
  for (int kind = 0; kind < 3; ++kind) {
    QueryStats stats;
    std::int64_t count = 0;
    auto start = std::chrono::steady_clock::now();
    for (std::int64_t r = 0; r < repeat; ++r) {
      for (const QueryLine& q : queries) {
        if (static_cast<int>(q.kind) != kind) continue;
        ++count;
        switch (q.kind) {
          case QueryLine::kPp: eng.pp.query(q.ids[0], q.ids[1], q.ids[2], q.ids[3], &stats); break;
          case QueryLine::kPt: eng.pt.query(q.ids[0], q.ids[1], q.ids[2], &stats); break;
          default: eng.tt.query(q.ids[0], q.ids[1], &stats); break;
        }
      }
    }
    auto end = std::chrono::steady_clock::now();
    if (count == 0) continue;
    double us = std::chrono::duration<double, std::micro>(end - start).count();
    std::cout << names[kind] << " queries " << count << " mean_us " << us / static_cast<double>(count)
              << " levels " << stats.level_invocations << " symbols " << stats.symbol_comparisons
              << " ranks " << stats.rank_lookups << " hash " << stats.hash_lookups << " rmq "
              << stats.rmq_calls << " pred " << stats.predecessor_calls << " steps "
              << stats.traversal_steps << '\n';
  }
  return 0;
}

int cmd_setdemo(const std::string& sets_path, std::int64_t tau) {
  std::vector<std::vector<std::int64_t>> sets;
  {
    std::istringstream ss(read_file(sets_path));
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(ss, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::vector<std::int64_t> set;
      std::int64_t e;
      while (ls >> e) {
        if (e < 0) throw ParseError("negative set element", line_no);
        set.push_back(e);
      }
      if (!ls.eof()) throw ParseError("malformed set element", line_no);
      sets.push_back(std::move(set));
    }
  }
  SetFamilyTree fam = family_to_tree(sets);
  if (tau <= 0) tau = default_tau(fam.tree.n);
  TtIndex tt;
  tt.build(fam.tree, tau);

  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(std::cin, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::int64_t i, j;
    if (!(ls >> i >> j)) throw ParseError("expected two set indices", line_no);
    if (i < 1 || j < 1 || i > static_cast<std::int64_t>(sets.size()) ||
        j > static_cast<std::int64_t>(sets.size()))
      throw PreconditionError("set index out of range", line_no);
    std::cout << (disjoint(tt, fam, static_cast<std::size_t>(i - 1),
                           static_cast<std::size_t>(j - 1))
                      ? "disjoint"
                      : "intersect")
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Longest common extension queries on edge-labeled trees"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate a labeled tree file");
  std::int64_t gen_n = 100, gen_sigma = 2;
  std::string gen_shape = "random", gen_out;
  std::uint64_t gen_seed = 1;
  gen->add_option("--n", gen_n, "node count");
  gen->add_option("--sigma", gen_sigma, "alphabet size");
  gen->add_option("--shape", gen_shape, "random|path|caterpillar|binary|star");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("-o,--out", gen_out, "output file ('-' for stdout)")->required();

  auto* trie = app.add_subcommand("trie", "Build the trie of a string file");
  std::string trie_in, trie_out, trie_map, trie_sep;
  trie->add_option("--in", trie_in, "strings file, one per line")->required();
  trie->add_option("-o,--out", trie_out, "output tree file")->required();
  trie->add_option("--map", trie_map, "write 'index leaf-node' lines here");
  trie->add_option("--sep", trie_sep, "token separator (default: single bytes)");

  auto* query = app.add_subcommand("query", "Answer query lines from stdin");
  std::string query_tree, query_mode = "simple";
  std::int64_t query_tau = 0;
  bool query_print_path = false;
  query->add_option("--tree", query_tree, "tree file")->required();
  query->add_option("--mode", query_mode, "simple|compact")->check(CLI::IsMember({"simple", "compact"}));
  query->add_option("--tau", query_tau, "tree-tree trade-off parameter");
  query->add_flag("--print-path", query_print_path, "append the matched label string");

  auto* selftest = app.add_subcommand("selftest", "Compare indexes against oracles");
  std::int64_t st_n = 200, st_sigma = 2, st_iters = 1000;
  std::uint64_t st_seed = 1;
  std::vector<std::string> st_shapes{"random", "path", "caterpillar", "binary", "star"};
  selftest->add_option("--n", st_n, "node count per tree");
  selftest->add_option("--sigma", st_sigma, "alphabet size");
  selftest->add_option("--iters", st_iters, "queries per kind per tree");
  selftest->add_option("--seed", st_seed, "random seed");
  selftest->add_option("--shapes", st_shapes, "shapes to test")->delimiter(',');

  auto* bench = app.add_subcommand("bench", "Time a query batch with counters");
  std::string bench_tree, bench_queries, bench_mode = "simple";
  std::int64_t bench_repeat = 1, bench_tau = 0;
  bench->add_option("--tree", bench_tree, "tree file")->required();
  bench->add_option("--queries", bench_queries, "query lines file")->required();
  bench->add_option("--repeat", bench_repeat, "repetitions");
  bench->add_option("--mode", bench_mode, "simple|compact")->check(CLI::IsMember({"simple", "compact"}));
  bench->add_option("--tau", bench_tau, "tree-tree trade-off parameter");

  auto* setdemo = app.add_subcommand("setdemo", "Set-intersection queries via tree-tree LCE");
  std::string sets_path;
  std::int64_t sd_tau = 0;
  setdemo->add_option("--sets", sets_path, "file with one set per line")->required();
  setdemo->add_option("--tau", sd_tau, "tree-tree trade-off parameter");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_out, gen_n, gen_sigma, gen_shape, gen_seed);
    if (trie->parsed()) return cmd_trie(trie_in, trie_out, trie_map, trie_sep);
    if (query->parsed()) return cmd_query(query_tree, query_mode, query_tau, query_print_path);
    if (selftest->parsed()) return cmd_selftest(st_n, st_sigma, st_iters, st_seed, st_shapes);
    if (bench->parsed()) return cmd_bench(bench_tree, bench_queries, bench_repeat, bench_mode, bench_tau);
    if (setdemo->parsed()) return cmd_setdemo(sets_path, sd_tau);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
