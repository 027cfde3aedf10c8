#pragma once

// Test-only oracles and instance samplers. The oracles deliberately use
// different algorithms than the library (reverse search, truth tables,
// subset enumeration) so they can stand as independent referees.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "steiner/generators.hpp"
#include "steiner/graph_kit.hpp"
#include "steiner/mixed_graph.hpp"
#include "steiner/preprocess.hpp"
#include "steiner/rng.hpp"

namespace testutil {

using namespace steiner;

inline Instance inst_of(int n, std::vector<Edge> edges, std::vector<Arc> arcs,
                        std::vector<TerminalPair> terms) {
  return make_instance(n, std::move(edges), std::move(arcs), std::move(terms));
}

// Orientation validity via reverse BFS from each sink.
inline bool reverse_check_orientation(const Instance& inst,
                                      const Orientation& o) {
  std::vector<std::vector<int>> radj(inst.graph.n);
  for (const auto& a : inst.graph.arcs) radj[a.second].push_back(a.first);
  for (const auto& [e, d] : o.dir) {
    Arc a = d ? Arc{e.first, e.second} : Arc{e.second, e.first};
    radj[a.second].push_back(a.first);
  }
  for (const auto& tp : inst.terminals) {
    if (tp.s == tp.t) continue;
    std::vector<char> seen(inst.graph.n, 0);
    std::vector<int> q{tp.t};
    seen[tp.t] = 1;
    while (!q.empty()) {
      int v = q.back();
      q.pop_back();
      for (int w : radj[v])
        if (!seen[w]) {
          seen[w] = 1;
          q.push_back(w);
        }
    }
    if (!seen[tp.s]) return false;
  }
  return true;
}

inline bool truth_table_sat(const CnfFormula& f) {
  for (std::uint64_t mask = 0; mask < (1ULL << f.vars); ++mask) {
    bool all = true;
    for (const auto& c : f.clauses) {
      bool sat = false;
      for (int l : c) {
        bool val = (mask >> (std::abs(l) - 1)) & 1;
        if ((l > 0) == val) { sat = true; break; }
      }
      if (!sat) { all = false; break; }
    }
    if (all) return true;
  }
  return false;
}

inline bool truth_table_2sat(const TwoSatFormula& f) {
  for (std::uint64_t mask = 0; mask < (1ULL << f.vars); ++mask) {
    bool all = true;
    for (const auto& [a, b] : f.clauses) {
      bool va = ((mask >> a.var) & 1) == (a.positive ? 1 : 0);
      bool vb = ((mask >> b.var) & 1) == (b.positive ? 1 : 0);
      if (!va && !vb) { all = false; break; }
    }
    if (all) return true;
  }
  return false;
}

inline bool clauses_satisfied(const TwoSatFormula& f,
                              const std::vector<bool>& assign) {
  for (const auto& [a, b] : f.clauses) {
    bool va = assign[a.var] == a.positive;
    bool vb = assign[b.var] == b.positive;
    if (!va && !vb) return false;
  }
  return true;
}

// Largest matching found by enumerating edge subsets up to size cap.
inline int brute_matching_size(const BipartiteGraph& b, int cap) {
  const int m = (int)b.edges.size();
  int best = 0;
  std::vector<int> pick;
  std::function<void(int, int)> rec = [&](int from, int chosen) {
    best = std::max(best, chosen);
    if (chosen == cap) return;
    for (int i = from; i < m; ++i) {
      bool ok = true;
      for (int j : pick)
        if (b.edges[j].first == b.edges[i].first ||
            b.edges[j].second == b.edges[i].second) {
          ok = false;
          break;
        }
      if (!ok) continue;
      pick.push_back(i);
      rec(i + 1, chosen + 1);
      pick.pop_back();
    }
  };
  rec(0, 0);
  return best;
}

// Minimum vertex cover size by enumerating all vertex subsets.
inline int brute_vc_size(const SimpleGraph& g) {
  int best = g.n;
  for (std::uint64_t mask = 0; mask < (1ULL << g.n); ++mask) {
    bool covers = true;
    for (const auto& e : g.edges)
      if (!((mask >> e.first) & 1) && !((mask >> e.second) & 1)) {
        covers = false;
        break;
      }
    if (covers) best = std::min(best, __builtin_popcountll(mask));
  }
  return best;
}

// Every simple mixed s->t path (edges usable both ways); returns the set of
// undirected edges each path uses.
inline std::vector<std::set<Edge>> all_path_edge_sets(const MixedGraph& g,
                                                      int s, int t) {
  std::vector<std::vector<std::pair<int, std::optional<Edge>>>> adj(g.n);
  for (const auto& a : g.arcs) adj[a.first].push_back({a.second, std::nullopt});
  for (const auto& e : g.edges) {
    adj[e.first].push_back({e.second, e});
    adj[e.second].push_back({e.first, e});
  }
  std::vector<std::set<Edge>> out;
  std::vector<char> seen(g.n, 0);
  std::set<Edge> used;
  std::function<void(int)> rec = [&](int v) {
    if (v == t) {
      out.push_back(used);
      return;
    }
    for (const auto& [w, e] : adj[v]) {
      if (seen[w]) continue;
      seen[w] = 1;
      if (e) used.insert(*e);
      rec(w);
      if (e) used.erase(*e);
      seen[w] = 0;
    }
  };
  seen[s] = 1;
  rec(s);
  return out;
}

// Exhaustive multicolored-clique search over n^k tuples.
inline bool has_multicolored_clique(const MulticoloredGraph& g) {
  std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> es;
  auto key = [](int c1, int i1, int c2, int i2) {
    std::pair<int, int> a{c1, i1}, b{c2, i2};
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  };
  for (const auto& e : g.edges) es.insert(key(e[0], e[1], e[2], e[3]));
  std::vector<int> pick(g.k, 0);
  std::function<bool(int)> rec = [&](int c) {
    if (c == g.k) return true;
    for (int i = 0; i < g.n; ++i) {
      bool ok = true;
      for (int c2 = 0; c2 < c; ++c2)
        if (!es.count(key(c, i, c2, pick[c2]))) {
          ok = false;
          break;
        }
      if (!ok) continue;
      pick[c] = i;
      if (rec(c + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

// --- samplers -------------------------------------------------------------

// Random instance within the oracle-corpus profile (n <= 12, |E| <= 10,
// |A| <= 15, k <= 4), by rejection.
inline Instance corpus_instance(std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0;; ++attempt) {
    int n = 2 + (int)rng.below(11);
    double pe = 0.05 + 0.25 * rng.unit();
    double pa = 0.05 + 0.35 * rng.unit();
    int k = (int)rng.below(5);
    if ((long long)k > (long long)n * (n - 1)) continue;
    Instance inst = gen_random(rng.next(), n, pe, pa, k);
    if ((int)inst.graph.edges.size() <= 10 && (int)inst.graph.arcs.size() <= 15)
      return inst;
  }
}

// Restricted mixed acyclic instance: a few disjoint undirected paths, arcs
// only at path endpoints and among path-free vertices, plus random demands.
inline Instance restricted_instance(std::uint64_t seed) {
  Rng rng(seed);
  int n_free = 1 + (int)rng.below(4);
  int paths = 1 + (int)rng.below(3);
  std::vector<std::vector<int>> seqs;
  int next = n_free;
  int edge_budget = 12;
  for (int p = 0; p < paths && edge_budget > 0; ++p) {
    int len = 1 + (int)rng.below(std::min(4, edge_budget));  // edges in path
    edge_budget -= len;
    std::vector<int> seq;
    for (int i = 0; i <= len; ++i) seq.push_back(next++);
    seqs.push_back(seq);
  }
  int n = next;
  std::vector<Edge> edges;
  std::vector<Arc> arcs;
  for (const auto& seq : seqs)
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
      edges.push_back(make_edge(seq[i], seq[i + 1]));
  // arcs among free vertices, forward only to stay acyclic
  for (int u = 0; u < n_free; ++u)
    for (int v = u + 1; v < n_free; ++v)
      if (rng.unit() < 0.4) arcs.push_back({u, v});
  // at most one arc per endpoint, to or from a free vertex
  for (const auto& seq : seqs)
    for (int ep : {seq.front(), seq.back()}) {
      double roll = rng.unit();
      if (roll < 0.4 && n_free > 0) {
        arcs.push_back({(int)rng.below(n_free), ep});
      } else if (roll < 0.8 && n_free > 0) {
        arcs.push_back({ep, (int)rng.below(n_free)});
      }
    }
  int k = (int)rng.below(4);
  std::set<TerminalPair> pairs;
  int guard = 0;
  while ((int)pairs.size() < k && ++guard < 200) {
    int s = (int)rng.below(n), t = (int)rng.below(n);
    if (s != t) pairs.insert({s, t});
  }
  Instance inst = inst_of(n, std::move(edges), std::move(arcs),
                          {pairs.begin(), pairs.end()});
  if (!is_mixed_acyclic(inst.graph)) return restricted_instance(seed + 1);
  return inst;
}

// Instance whose underlying graph minus a planted modulator is a clique:
// clique arcs follow a topological order, with a few consecutive pairs turned
// into matching edges; modulator vertices attach freely but acyclically.
inline std::pair<Instance, std::vector<int>> modulator_instance(
    std::uint64_t seed) {
  Rng rng(seed);
  for (;;) {
    int c = 2 + (int)rng.below(6);  // clique size
    int d = (int)rng.below(4);      // modulator size
    int n = c + d;
    std::vector<Edge> edges;
    std::vector<Arc> arcs;
    // clique on 0..c-1 ordered by id; a matching of consecutive pairs becomes
    // undirected, every other pair a forward arc
    std::set<int> pair_start;  // u such that {u, u+1} is an edge
    for (int u = 0; u + 1 < c; ++u)
      if (!pair_start.count(u > 0 ? u - 1 : u) && rng.unit() < 0.35)
        if (u == 0 || !pair_start.count(u - 1)) pair_start.insert(u);
    for (int u = 0; u < c; ++u)
      for (int v = u + 1; v < c; ++v) {
        if (v == u + 1 && pair_start.count(u))
          edges.push_back({u, v});
        else
          arcs.push_back({u, v});
      }
    // modulator connections
    std::vector<int> modulator;
    for (int m = c; m < n; ++m) {
      modulator.push_back(m);
      bool used_edge = false;
      for (int v = 0; v < c; ++v) {
        double roll = rng.unit();
        if (roll < 0.25) arcs.push_back({m, v});
        else if (roll < 0.5) arcs.push_back({v, m});
        else if (roll < 0.6 && !used_edge) {
          edges.push_back(make_edge(m, v));
          used_edge = true;
        }
      }
      for (int m2 = c; m2 < m; ++m2)
        if (rng.unit() < 0.3) arcs.push_back({m2, m});
    }
    int k = 1 + (int)rng.below(3);
    std::set<TerminalPair> pairs;
    int guard = 0;
    while ((int)pairs.size() < k && ++guard < 100) {
      int s = (int)rng.below(n), t = (int)rng.below(n);
      if (s != t) pairs.insert({s, t});
    }
    Instance inst;
    try {
      inst = inst_of(n, std::move(edges), std::move(arcs),
                     {pairs.begin(), pairs.end()});
    } catch (const std::logic_error&) {
      seed = rng.next();
      continue;
    }
    if (!is_mixed_acyclic(inst.graph)) {
      seed = rng.next();
      continue;
    }
    std::set<int> mod(modulator.begin(), modulator.end());
    MixedGraph u = underlying_graph(inst.graph);
    bool clique = true;
    for (int a = 0; a < c && clique; ++a)
      for (int b = a + 1; b < c; ++b)
        if (!u.has_edge(a, b)) {
          clique = false;
          break;
        }
    if (!clique) {
      seed = rng.next();
      continue;
    }
    return {inst, modulator};
  }
}

// Sparse random instance that happens to be mixed acyclic with a small exact
// vertex cover; returns the cover.
inline std::optional<std::pair<Instance, std::vector<int>>> small_cover_instance(
    std::uint64_t seed, int max_cover) {
  Rng rng(seed);
  int n = 4 + (int)rng.below(6);
  Instance inst = gen_random(rng.next(), n, 0.12, 0.18, (int)rng.below(4));
  if (!is_mixed_acyclic(inst.graph)) return std::nullopt;
  auto cover =
      vertex_cover_exact(SimpleGraph::from_underlying(inst.graph), max_cover);
  if (!cover) return std::nullopt;
  return std::make_pair(inst, *cover);
}

// Random instance whose terminal pairs share no vertex.
inline Instance nonoverlap_instance(std::uint64_t seed) {
  Rng rng(seed);
  for (;;) {
    int n = 4 + (int)rng.below(9);
    Instance inst = gen_random(rng.next(), n, 0.2, 0.25, 0);
    int k = 1 + (int)rng.below(std::min(4, n / 2));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.below(i + 1)]);
    std::vector<TerminalPair> pairs;
    for (int i = 0; i + 1 < 2 * k && i + 1 < n; i += 2)
      pairs.push_back({perm[i], perm[i + 1]});
    if (pairs.empty()) continue;
    inst.terminals = pairs;
    normalize(inst);
    return inst;
  }
}

}  // namespace testutil
