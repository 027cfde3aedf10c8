#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "steiner/mixed_graph.hpp"

namespace steiner {

struct Digraph {
  int n = 0;
  std::vector<std::vector<int>> out;

  Digraph() = default;
  explicit Digraph(int n_) : n(n_), out(n_) {}

  void add_arc(int u, int v) { out[u].push_back(v); }

  static Digraph from_arcs(int n, const std::vector<Arc>& arcs) {
    Digraph g(n);
    for (const auto& a : arcs) g.add_arc(a.first, a.second);
    return g;
  }
};

struct SccResult {
  std::vector<int> comp;  // per vertex; ids number SCCs in reverse topological order
  int count = 0;
  Digraph condensation;  // acyclic, self-loops and duplicates removed
};

// Iterative Tarjan. Component ids are assigned in completion order, so every
// condensation arc goes from a higher id to a lower one.
inline SccResult scc_condense(const Digraph& g) {
  SccResult res;
  res.comp.assign(g.n, -1);
  std::vector<int> index(g.n, -1), low(g.n, 0), stack;
  std::vector<char> on_stack(g.n, 0);
  int next_index = 0;

  struct Frame {
    int v;
    std::size_t child;
  };
  std::vector<Frame> frames;

  for (int root = 0; root < g.n; ++root) {
    if (index[root] != -1) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < g.out[f.v].size()) {
        int w = g.out[f.v][f.child++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            res.comp[w] = res.count;
            if (w == v) break;
          }
          ++res.count;
        }
      }
    }
  }

  res.condensation = Digraph(res.count);
  std::vector<std::pair<int, int>> carcs;
  for (int v = 0; v < g.n; ++v)
    for (int w : g.out[v])
      if (res.comp[v] != res.comp[w]) carcs.push_back({res.comp[v], res.comp[w]});
  std::sort(carcs.begin(), carcs.end());
  carcs.erase(std::unique(carcs.begin(), carcs.end()), carcs.end());
  for (const auto& a : carcs) res.condensation.add_arc(a.first, a.second);
  return res;
}

// Vertices with a directed path from `from`, including `from`, sorted.
inline std::vector<int> reachable(const Digraph& g, int from) {
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : g.out[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  std::vector<int> out;
  for (int v = 0; v < g.n; ++v)
    if (seen[v]) out.push_back(v);
  return out;
}

struct TopoResult {
  bool acyclic = false;
  std::vector<int> order;  // valid iff acyclic
  std::vector<int> cycle;  // one directed cycle's vertex sequence iff not
};

// Kahn's algorithm, smallest available id first.
inline TopoResult topo_order(const Digraph& g) {
  TopoResult res;
  std::vector<int> indeg(g.n, 0);
  for (int v = 0; v < g.n; ++v)
    for (int w : g.out[v]) ++indeg[w];
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int v = 0; v < g.n; ++v)
    if (indeg[v] == 0) ready.push(v);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    res.order.push_back(v);
    for (int w : g.out[v])
      if (--indeg[w] == 0) ready.push(w);
  }
  if ((int)res.order.size() == g.n) {
    res.acyclic = true;
    return res;
  }
  // The vertices Kahn never released are reachable from cycles; a DFS
  // restricted to them finds a back arc.
  res.order.clear();
  std::vector<int> state(g.n, 0);  // 0 unvisited, 1 on path, 2 done
  std::vector<int> path;
  std::function<bool(int)> dfs = [&](int v) {
    state[v] = 1;
    path.push_back(v);
    for (int w : g.out[v]) {
      if (indeg[w] == 0 || state[w] == 2) continue;
      if (state[w] == 1) {
        auto it = std::find(path.begin(), path.end(), w);
        res.cycle.assign(it, path.end());
        // rotate so the smallest vertex leads, for determinism
        auto mn = std::min_element(res.cycle.begin(), res.cycle.end());
        std::rotate(res.cycle.begin(), mn, res.cycle.end());
        return true;
      }
      if (dfs(w)) return true;
    }
    state[v] = 2;
    path.pop_back();
    return false;
  };
  for (int v = 0; v < g.n; ++v) {
    if (indeg[v] == 0 || state[v] != 0) continue;
    path.clear();
    if (dfs(v)) return res;
  }
  throw std::logic_error("topo_order: cycle expected but not found");
}

struct BipartiteGraph {
  int left = 0;
  int right = 0;
  std::vector<std::pair<int, int>> edges;  // (left index, right index)
};

struct Matching {
  std::vector<std::pair<int, int>> pairs;
};

// Hopcroft-Karp. Deterministic: adjacency sorted, BFS/DFS in index order.
inline Matching max_bipartite_matching(const BipartiteGraph& b) {
  std::vector<std::vector<int>> adj(b.left);
  for (const auto& [l, r] : b.edges) {
    if (l < 0 || l >= b.left || r < 0 || r >= b.right)
      throw std::logic_error("bipartite edge out of range");
    adj[l].push_back(r);
  }
  for (auto& v : adj) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  const int NIL = -1;
  std::vector<int> match_l(b.left, NIL), match_r(b.right, NIL), dist(b.left);
  const int INF = 1 << 30;

  auto bfs = [&]() {
    std::queue<int> q;
    for (int l = 0; l < b.left; ++l) {
      if (match_l[l] == NIL) {
        dist[l] = 0;
        q.push(l);
      } else {
        dist[l] = INF;
      }
    }
    bool found = false;
    while (!q.empty()) {
      int l = q.front();
      q.pop();
      for (int r : adj[l]) {
        int l2 = match_r[r];
        if (l2 == NIL) {
          found = true;
        } else if (dist[l2] == INF) {
          dist[l2] = dist[l] + 1;
          q.push(l2);
        }
      }
    }
    return found;
  };
  std::function<bool(int)> dfs = [&](int l) {
    for (int r : adj[l]) {
      int l2 = match_r[r];
      if (l2 == NIL || (dist[l2] == dist[l] + 1 && dfs(l2))) {
        match_l[l] = r;
        match_r[r] = l;
        return true;
      }
    }
    dist[l] = INF;
    return false;
  };
  while (bfs())
    for (int l = 0; l < b.left; ++l)
      if (match_l[l] == NIL) dfs(l);

  Matching m;
  for (int l = 0; l < b.left; ++l)
    if (match_l[l] != NIL) m.pairs.push_back({l, match_l[l]});
  return m;
}

struct Lit {
  int var = 0;
  bool positive = true;
  auto operator<=>(const Lit&) const = default;
};

// Clause list of literal pairs; a unary clause is stored as (l, l).
struct TwoSatFormula {
  int vars = 0;
  std::vector<std::pair<Lit, Lit>> clauses;

  void add_clause(Lit a, Lit b) { clauses.push_back({a, b}); }
  void add_unary(Lit a) { clauses.push_back({a, a}); }
};

// Implication-graph 2-SAT. Returns an assignment or nullopt if unsatisfiable
// (a variable shares an SCC with its negation).
inline std::optional<std::vector<bool>> solve_2sat(const TwoSatFormula& f) {
  auto node = [](Lit l) { return 2 * l.var + (l.positive ? 0 : 1); };
  auto neg = [](Lit l) { return Lit{l.var, !l.positive}; };
  Digraph g(2 * f.vars);
  for (const auto& [a, b] : f.clauses) {
    if (a.var < 0 || a.var >= f.vars || b.var < 0 || b.var >= f.vars)
      throw std::logic_error("2sat literal out of range");
    g.add_arc(node(neg(a)), node(b));
    if (!(a == b)) g.add_arc(node(neg(b)), node(a));
  }
  auto scc = scc_condense(g);
  std::vector<bool> assign(f.vars);
  for (int v = 0; v < f.vars; ++v) {
    int cp = scc.comp[2 * v], cn = scc.comp[2 * v + 1];
    if (cp == cn) return std::nullopt;
    assign[v] = cp < cn;  // earlier completion = later in implication order
  }
  return assign;
}

struct SimpleGraph {
  int n = 0;
  std::vector<Edge> edges;  // normalized, sorted, unique

  static SimpleGraph from_underlying(const MixedGraph& g) {
    MixedGraph u = underlying_graph(g);
    return SimpleGraph{u.n, std::move(u.edges)};
  }
  SimpleGraph complement() const {
    SimpleGraph c{n, {}};
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (!std::binary_search(edges.begin(), edges.end(), Edge{u, v}))
          c.edges.push_back({u, v});
    return c;
  }
};

namespace detail {

struct VcState {
  const std::vector<std::vector<int>>& adj;
  std::vector<char> in_cover;
  std::vector<char> removed;
  std::vector<int> cur;
  std::optional<std::vector<int>> best;
  int cap;

  int pick_max_degree() const {
    int best_v = -1, best_d = 0;
    for (int v = 0; v < (int)adj.size(); ++v) {
      if (removed[v]) continue;
      int d = 0;
      for (int w : adj[v])
        if (!removed[w]) ++d;
      if (d > best_d) {
        best_d = d;
        best_v = v;
      }
    }
    return best_d == 0 ? -1 : best_v;
  }

  void take(int v, std::vector<int>& log) {
    in_cover[v] = 1;
    removed[v] = 1;
    cur.push_back(v);
    log.push_back(v);
  }
  void untake(const std::vector<int>& log) {
    for (int v : log) {
      in_cover[v] = 0;
      removed[v] = 0;
      cur.pop_back();
    }
  }

  void search() {
    if (best && cur.size() + 1 > best->size()) return;  // cannot improve
    if ((int)cur.size() > cap) return;
    int v = pick_max_degree();
    if (v == -1) {
      if (!best || cur.size() < best->size()) best = cur;
      return;
    }
    // branch 1: v joins the cover
    {
      std::vector<int> log;
      take(v, log);
      search();
      untake(log);
    }
    // branch 2: all of v's live neighbors join the cover
    {
      std::vector<int> log;
      removed[v] = 1;
      for (int w : adj[v])
        if (!removed[w]) take(w, log);
      search();
      untake(log);
      removed[v] = 0;
    }
  }
};

}  // namespace detail

// Minimum vertex cover by bounded branching on a maximum-degree vertex.
// Returns nullopt if no cover of size <= cap exists.
inline std::optional<std::vector<int>> vertex_cover_exact(const SimpleGraph& g,
                                                          int cap = 32) {
  std::vector<std::vector<int>> adj(g.n);
  for (const auto& e : g.edges) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  for (auto& v : adj) std::sort(v.begin(), v.end());
  detail::VcState st{adj,
                     std::vector<char>(g.n, 0),
                     std::vector<char>(g.n, 0),
                     {},
                     std::nullopt,
                     cap};
  st.search();
  if (st.best) std::sort(st.best->begin(), st.best->end());
  return st.best;
}

// Endpoints of a greedily maximal matching: a 2-approximation.
inline std::vector<int> vertex_cover_2approx(const SimpleGraph& g) {
  std::vector<char> covered(g.n, 0);
  std::vector<int> cover;
  for (const auto& e : g.edges) {
    if (covered[e.first] || covered[e.second]) continue;
    covered[e.first] = covered[e.second] = 1;
    cover.push_back(e.first);
    cover.push_back(e.second);
  }
  std::sort(cover.begin(), cover.end());
  return cover;
}

inline bool is_vertex_cover(const SimpleGraph& g, const std::vector<int>& cover) {
  std::vector<char> in(g.n, 0);
  for (int v : cover) {
    if (v < 0 || v >= g.n) return false;
    in[v] = 1;
  }
  for (const auto& e : g.edges)
    if (!in[e.first] && !in[e.second]) return false;
  return true;
}

}  // namespace steiner
