#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "steiner/mixed_graph.hpp"
#include "steiner/rng.hpp"

namespace steiner {

struct CnfFormula {
  int vars = 0;
  std::vector<std::vector<int>> clauses;  // signed 1-based literals
};

inline void validate_cnf(const CnfFormula& f) {
  for (const auto& c : f.clauses) {
    if (c.empty()) throw RefusalError("cnf: empty clause");
    for (int l : c)
      if (l == 0 || std::abs(l) > f.vars)
        throw RefusalError("cnf: literal out of range");
  }
}

// DIMACS cnf: `c` comments, `p cnf <vars> <clauses>`, 0-terminated clauses
// that may span lines.
inline CnfFormula parse_dimacs_cnf(std::istream& in) {
  CnfFormula f;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  long long nclauses = 0;
  std::vector<int> cur;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;
    if (tok == "c") continue;
    if (tok == "p") {
      if (have_header) throw ParseError("duplicate header", lineno);
      std::string kind;
      long long nv;
      if (!(ss >> kind >> nv >> nclauses) || kind != "cnf" || nv < 0 || nclauses < 0)
        throw ParseError("malformed 'p cnf' header", lineno);
      f.vars = (int)nv;
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("clause before header", lineno);
    ss.clear();
    ss.str(line);
    long long lit;
    while (ss >> lit) {
      if (lit == 0) {
        if (cur.empty()) throw ParseError("empty clause", lineno);
        f.clauses.push_back(cur);
        cur.clear();
      } else {
        if (std::abs(lit) > f.vars)
          throw ParseError("literal out of range", lineno);
        cur.push_back((int)lit);
      }
    }
  }
  if (!have_header) throw ParseError("missing 'p cnf' header", 1);
  if (!cur.empty()) throw ParseError("unterminated clause", lineno);
  if ((long long)f.clauses.size() != nclauses)
    throw ParseError("clause count mismatch with header", lineno);
  validate_cnf(f);
  return f;
}

// All-positive or all-negative clauses of width 1..3; repeated literals are
// collapsed.
struct MonotoneCnf {
  CnfFormula f;

  static MonotoneCnf from(CnfFormula raw) {
    validate_cnf(raw);
    for (auto& c : raw.clauses) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      bool pos = c.front() > 0, neg = c.back() < 0;
      if (pos == neg)
        throw RefusalError("monotone cnf: clause mixes polarities");
      if (c.size() > 3) throw RefusalError("monotone cnf: clause wider than 3");
    }
    return MonotoneCnf{std::move(raw)};
  }
};

struct MulticoloredGraph {
  int k = 0;  // color classes
  int n = 0;  // vertices per class
  std::vector<std::array<int, 4>> edges;  // (class1, idx1, class2, idx2), 0-based
};

// `p mcc <k> <n>` then `e <c1> <i1> <c2> <i2>` lines, 1-based.
inline MulticoloredGraph parse_mcc(std::istream& in) {
  MulticoloredGraph g;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;
    if (tok == "c") continue;
    if (tok == "p") {
      std::string kind;
      long long k, n;
      if (have_header) throw ParseError("duplicate header", lineno);
      if (!(ss >> kind >> k >> n) || kind != "mcc" || k < 1 || n < 1)
        throw ParseError("malformed 'p mcc' header", lineno);
      g.k = (int)k;
      g.n = (int)n;
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("data line before header", lineno);
    if (tok != "e") throw ParseError("unknown line type '" + tok + "'", lineno);
    long long c1, i1, c2, i2;
    if (!(ss >> c1 >> i1 >> c2 >> i2))
      throw ParseError("expected four ids", lineno);
    if (c1 < 1 || c1 > g.k || c2 < 1 || c2 > g.k || i1 < 1 || i1 > g.n ||
        i2 < 1 || i2 > g.n)
      throw ParseError("id out of range", lineno);
    if (c1 == c2) throw ParseError("edge inside a color class", lineno);
    g.edges.push_back({(int)c1 - 1, (int)i1 - 1, (int)c2 - 1, (int)i2 - 1});
  }
  if (!have_header) throw ParseError("missing 'p mcc' header", 1);
  return g;
}

// One undirected edge per variable between its two literal vertices; per
// clause a source with arcs to the negated-literal vertices and a sink fed by
// the literal vertices. Satisfiable iff the output is a yes-instance.
// Numbering: variable i occupies 2(i-1) (positive) and 2(i-1)+1 (negative);
// clause j occupies 2*vars + 2j (source) and 2*vars + 2j + 1 (sink).
inline Instance gen_cnf_sat(const CnfFormula& phi) {
  validate_cnf(phi);
  auto lit_vertex = [&](int l) {
    return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1;
  };
  int n = 2 * phi.vars + 2 * (int)phi.clauses.size();
  std::vector<Edge> edges;
  std::vector<Arc> arcs;
  std::vector<TerminalPair> terminals;
  for (int i = 0; i < phi.vars; ++i) edges.push_back({2 * i, 2 * i + 1});
  std::set<Arc> arc_set;
  for (int j = 0; j < (int)phi.clauses.size(); ++j) {
    int s = 2 * phi.vars + 2 * j, t = s + 1;
    terminals.push_back({s, t});
    for (int l : phi.clauses[j]) {
      arc_set.insert({s, lit_vertex(-l)});
      arc_set.insert({lit_vertex(l), t});
    }
  }
  arcs.assign(arc_set.begin(), arc_set.end());
  return make_instance(n, std::move(edges), std::move(arcs),
                       std::move(terminals));
}

// Variable gadgets l_i - r_i hang off two hubs; each clause adds a star of
// literal vertices around its sink. Positive clauses route through the left
// hub, negative clauses mirror through the right one. Satisfiable iff the
// output is a yes-instance.
// Numbering: hub l = 0, hub r = 1, variable i occupies 2 + 2(i-1) (l_i) and
// 3 + 2(i-1) (r_i); clause blocks follow in order, sink first.
inline Instance gen_monotone3sat(const MonotoneCnf& mono) {
  const CnfFormula& phi = mono.f;
  const int HUB_L = 0, HUB_R = 1;
  auto lv = [&](int i) { return 2 + 2 * (i - 1); };
  auto rv = [&](int i) { return 3 + 2 * (i - 1); };
  int next = 2 + 2 * phi.vars;
  std::vector<Edge> edges;
  std::vector<Arc> arcs;
  std::vector<TerminalPair> terminals;
  for (int i = 1; i <= phi.vars; ++i) {
    edges.push_back(make_edge(lv(i), rv(i)));
    arcs.push_back({lv(i), HUB_L});
    arcs.push_back({rv(i), HUB_R});
  }
  for (const auto& clause : phi.clauses) {
    bool positive = clause.front() > 0;
    int t = next++;
    for (int lit : clause) {
      int var = std::abs(lit);
      int v = next++;
      edges.push_back(make_edge(v, t));
      if (positive) {
        arcs.push_back({HUB_L, v});
        terminals.push_back({rv(var), v});
      } else {
        arcs.push_back({HUB_R, v});
        terminals.push_back({lv(var), v});
      }
    }
    if (positive) {
      arcs.push_back({HUB_R, t});
      terminals.push_back({HUB_L, t});
    } else {
      arcs.push_back({HUB_L, t});
      terminals.push_back({HUB_R, t});
    }
  }
  return make_instance(next, std::move(edges), std::move(arcs),
                       std::move(terminals));
}

// Hub square l/l'/r/r' of side sqrt(k) with complete hub arc bundles; every
// color class gets selector blocks X_i, Y_i of size n wired to its hub pair.
// Terminal pairs: hub-to-hub demands, per-class consistency demands, and two
// demands per non-edge. The output has a k-multicolored-clique iff the input
// does; the 4*sqrt(k) hubs form a vertex cover.
// Numbering: l_1..l_R, l'_1..l'_R, r_1..r_R, r'_1..r'_R, then per class i the
// block X_i followed by Y_i.
inline Instance gen_multicolored_clique(const MulticoloredGraph& g) {
  int k = g.k;
  int r = 1;
  while (r * r < k) ++r;
  const int K = r * r;  // padded class count
  const int n = g.n;

  std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> e_in;
  auto key = [](int c1, int i1, int c2, int i2) {
    std::pair<int, int> a{c1, i1}, b{c2, i2};
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  };
  for (const auto& e : g.edges) e_in.insert(key(e[0], e[1], e[2], e[3]));
  // dummy classes are adjacent to everything else
  for (int c = g.k; c < K; ++c)
    for (int i = 0; i < n; ++i)
      for (int c2 = 0; c2 < K; ++c2) {
        if (c2 == c) continue;
        for (int i2 = 0; i2 < n; ++i2) e_in.insert(key(c, i, c2, i2));
      }
  auto adjacent = [&](int c1, int i1, int c2, int i2) {
    return e_in.count(key(c1, i1, c2, i2)) > 0;
  };

  auto hub_l = [&](int a) { return a; };
  auto hub_lp = [&](int a) { return r + a; };
  auto hub_r = [&](int a) { return 2 * r + a; };
  auto hub_rp = [&](int a) { return 3 * r + a; };
  auto x_of = [&](int i, int j) { return 4 * r + i * 2 * n + j; };
  auto y_of = [&](int i, int j) { return 4 * r + i * 2 * n + n + j; };
  auto row = [&](int i) { return i / r; };  // h(i) = (row, col), row-major
  auto col = [&](int i) { return i % r; };

  std::vector<Edge> edges;
  std::vector<Arc> arcs;
  std::vector<TerminalPair> terminals;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      arcs.push_back({hub_l(a), hub_lp(b)});
      arcs.push_back({hub_r(a), hub_rp(b)});
    }
  for (int i = 0; i < K; ++i) {
    int a = row(i), b = col(i);
    for (int j = 0; j < n; ++j) {
      edges.push_back(make_edge(hub_l(a), x_of(i, j)));
      arcs.push_back({x_of(i, j), hub_r(b)});
      arcs.push_back({hub_lp(a), y_of(i, j)});
      edges.push_back(make_edge(hub_rp(b), y_of(i, j)));
    }
  }
  // step 1: hub demands
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      terminals.push_back({hub_l(a), hub_r(b)});
      terminals.push_back({hub_lp(a), hub_rp(b)});
    }
  // step 2: consistency demands
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < n; ++j)
      for (int j2 = 0; j2 < n; ++j2)
        if (j2 != j) terminals.push_back({x_of(i, j), y_of(i, j2)});
  // step 3: edge-checking demands for non-edges
  for (int i1 = 0; i1 < K; ++i1)
    for (int i2 = i1 + 1; i2 < K; ++i2)
      for (int j1 = 0; j1 < n; ++j1)
        for (int j2 = 0; j2 < n; ++j2)
          if (!adjacent(i1, j1, i2, j2)) {
            terminals.push_back({x_of(i1, j1), y_of(i2, j2)});
            terminals.push_back({x_of(i2, j2), y_of(i1, j1)});
          }
  return make_instance(4 * r + 2 * n * K, std::move(edges), std::move(arcs),
                       std::move(terminals));
}

// Each unordered pair independently becomes an edge with probability p_edge,
// else an arc of random direction with probability p_arc. Terminal pairs are
// distinct ordered pairs of distinct vertices. Deterministic in the seed.
inline Instance gen_random(std::uint64_t seed, int n, double p_edge,
                           double p_arc, int k) {
  if (p_edge < 0 || p_arc < 0 || p_edge + p_arc > 1)
    throw RefusalError("gen_random: probabilities out of range");
  if (n < 0 || k < 0 || (k > 0 && (long long)k > (long long)n * (n - 1)))
    throw RefusalError("gen_random: k exceeds the number of ordered pairs");
  Rng rng(seed);
  std::vector<Edge> edges;
  std::vector<Arc> arcs;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      double roll = rng.unit();
      if (roll < p_edge) {
        edges.push_back({u, v});
      } else if (roll < p_edge + p_arc) {
        if (rng.next() & 1)
          arcs.push_back({u, v});
        else
          arcs.push_back({v, u});
      }
    }
  std::set<TerminalPair> pairs;
  while ((int)pairs.size() < k) {
    int s = (int)rng.below(n), t = (int)rng.below(n);
    if (s != t) pairs.insert({s, t});
  }
  return make_instance(n, std::move(edges), std::move(arcs),
                       {pairs.begin(), pairs.end()});
}

}  // namespace steiner
