#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "steiner/graph_kit.hpp"
#include "steiner/mixed_graph.hpp"
#include "steiner/preprocess.hpp"

namespace steiner {

// Restricted form: a vertex of mixed degree >= 3 touches no undirected edge.
// In a mixed acyclic instance this makes every non-trivial undirected
// component a path with arc-free interior and at most one arc per endpoint.
inline bool is_restricted(const Instance& inst) {
  std::vector<int> deg_e(inst.graph.n, 0), deg_a(inst.graph.n, 0);
  for (const auto& e : inst.graph.edges) {
    ++deg_e[e.first];
    ++deg_e[e.second];
  }
  for (const auto& a : inst.graph.arcs) {
    ++deg_a[a.first];
    ++deg_a[a.second];
  }
  for (int v = 0; v < inst.graph.n; ++v)
    if (deg_e[v] > 0 && deg_e[v] + deg_a[v] >= 3) return false;
  return true;
}

namespace detail {

// Word-packed single-source reachability used by the brute-force loop.
struct BitReach {
  int n = 0, words = 0;

  explicit BitReach(int n_) : n(n_), words((n_ + 63) / 64) {}

  // out: row-major n x words adjacency bitmask. Returns true iff t reachable
  // from s.
  bool run(const std::vector<std::uint64_t>& out, int s, int t) const {
    std::vector<std::uint64_t> reach(words, 0), frontier(words, 0);
    frontier[s >> 6] |= 1ULL << (s & 63);
    reach[s >> 6] |= 1ULL << (s & 63);
    while (true) {
      std::vector<std::uint64_t> next(words, 0);
      for (int w = 0; w < words; ++w) {
        std::uint64_t f = frontier[w];
        while (f) {
          int b = __builtin_ctzll(f);
          f &= f - 1;
          int v = (w << 6) | b;
          for (int x = 0; x < words; ++x) next[x] |= out[(std::size_t)v * words + x];
        }
      }
      bool grew = false;
      for (int w = 0; w < words; ++w) {
        std::uint64_t fresh = next[w] & ~reach[w];
        if (fresh) grew = true;
        reach[w] |= fresh;
        frontier[w] = fresh;
      }
      if (reach[t >> 6] & (1ULL << (t & 63))) return true;
      if (!grew) return false;
    }
  }
};

// Plain adjacency reachability with memoized sources.
struct ReachOracle {
  std::vector<std::vector<int>> adj;
  std::map<int, std::vector<char>> memo;

  explicit ReachOracle(int n) : adj(n) {}

  void add(int u, int v) {
    adj[u].push_back(v);
    memo.clear();
  }

  bool reach(int s, int t) {
    auto it = memo.find(s);
    if (it == memo.end()) {
      std::vector<char> seen(adj.size(), 0);
      std::vector<int> stack{s};
      seen[s] = 1;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
          if (!seen[w]) {
            seen[w] = 1;
            stack.push_back(w);
          }
      }
      it = memo.emplace(s, std::move(seen)).first;
    }
    return it->second[t];
  }
};

}  // namespace detail

// Enumerate all 2^|E| orientations in lexicographic order over the sorted
// edge list, low id -> high id first, and return the first satisfying one.
inline Verdict solve_brute(const Instance& inst, int edge_cap = 24) {
  const auto& g = inst.graph;
  const int m = (int)g.edges.size();
  if (m > edge_cap || m > 62)
    throw RefusalError("solve_brute: " + std::to_string(m) +
                       " edges exceed the cap of " +
                       std::to_string(std::min(edge_cap, 62)));

  std::vector<TerminalPair> pairs;
  for (const auto& tp : inst.terminals)
    if (tp.s != tp.t) pairs.push_back(tp);
  if (pairs.empty()) {
    Orientation o;
    for (const auto& e : g.edges) o.dir[e] = true;
    return {true, o};
  }

  detail::BitReach br(g.n);
  const int W = br.words;
  std::vector<std::uint64_t> base((std::size_t)g.n * W, 0);
  auto set_arc = [&](std::vector<std::uint64_t>& out, int u, int v) {
    out[(std::size_t)u * W + (v >> 6)] |= 1ULL << (v & 63);
  };
  for (const auto& a : g.arcs) set_arc(base, a.first, a.second);

  std::vector<std::uint64_t> out;
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    out = base;
    for (int i = 0; i < m; ++i) {
      bool low_to_high = ((mask >> (m - 1 - i)) & 1) == 0;
      const Edge& e = g.edges[i];
      if (low_to_high)
        set_arc(out, e.first, e.second);
      else
        set_arc(out, e.second, e.first);
    }
    bool ok = true;
    for (const auto& tp : pairs)
      if (!br.run(out, tp.s, tp.t)) {
        ok = false;
        break;
      }
    if (ok) {
      Orientation o;
      for (int i = 0; i < m; ++i)
        o.dir[g.edges[i]] = ((mask >> (m - 1 - i)) & 1) == 0;
      return {true, o};
    }
  }
  return {false, {}};
}

namespace detail {

struct PathComp {
  std::vector<int> seq;  // left endpoint (smaller id) first
};

// Non-trivial components of the unoriented edge set; each must be a path.
inline std::vector<PathComp> undirected_paths(int n,
                                              const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : edges) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  std::vector<char> used(n, 0);
  std::vector<PathComp> paths;
  for (int v = 0; v < n; ++v) {
    if (used[v] || adj[v].empty()) continue;
    // collect the component
    std::vector<int> comp{v};
    used[v] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (int w : adj[comp[i]])
        if (!used[w]) {
          used[w] = 1;
          comp.push_back(w);
        }
    int e1 = -1, e2 = -1;
    for (int u : comp) {
      if (adj[u].size() > 2)
        throw std::logic_error("undirected component is not a path");
      if (adj[u].size() == 1) (e1 == -1 ? e1 : e2) = u;
    }
    if (e1 == -1) throw std::logic_error("undirected component is a cycle");
    if (e2 < e1) std::swap(e1, e2);
    PathComp p;
    int prev = -1, cur = e1;
    while (true) {
      p.seq.push_back(cur);
      int next = -1;
      for (int w : adj[cur])
        if (w != prev) next = w;
      if (next == -1) break;
      prev = cur;
      cur = next;
    }
    paths.push_back(std::move(p));
  }
  return paths;
}

}  // namespace detail

// Polynomial decision procedure for restricted mixed acyclic instances:
// force same-path demands and through-paths, reject the trivially infeasible
// path patterns, settle arc-only demands by reachability, and encode the
// remaining endpoint choices as 2-SAT.
inline Verdict solve_restricted(const Instance& inst) {
  if (!is_restricted(inst))
    throw std::logic_error("solve_restricted: instance is not restricted");
  if (!is_mixed_acyclic(inst.graph))
    throw std::logic_error("solve_restricted: instance has a mixed cycle");

  const auto& g = inst.graph;
  std::map<Edge, bool> forced;  // true = first -> second
  bool conflict = false;
  auto force = [&](int from, int to) {
    Edge e = make_edge(from, to);
    bool dir = (from == e.first);
    auto it = forced.find(e);
    if (it != forced.end() && it->second != dir) conflict = true;
    forced[e] = dir;
  };

  std::vector<TerminalPair> pairs;
  for (const auto& tp : inst.terminals)
    if (tp.s != tp.t) pairs.push_back(tp);

  auto live_edges = [&]() {
    std::vector<Edge> live;
    for (const auto& e : g.edges)
      if (!forced.count(e)) live.push_back(e);
    return live;
  };

  // step 1: demands inside one path have a unique satisfying subpath
  {
    auto paths = detail::undirected_paths(g.n, live_edges());
    std::map<int, std::pair<int, int>> where;  // vertex -> (path, position)
    for (int p = 0; p < (int)paths.size(); ++p)
      for (int i = 0; i < (int)paths[p].seq.size(); ++i)
        where[paths[p].seq[i]] = {p, i};
    std::vector<TerminalPair> rest;
    for (const auto& tp : pairs) {
      auto is_ = where.find(tp.s), it_ = where.find(tp.t);
      if (is_ == where.end() || it_ == where.end() ||
          is_->second.first != it_->second.first) {
        rest.push_back(tp);
        continue;
      }
      const auto& seq = paths[is_->second.first].seq;
      int ps = is_->second.second, pt = it_->second.second;
      if (ps < pt)
        for (int i = ps; i < pt; ++i) force(seq[i], seq[i + 1]);
      else
        for (int i = ps; i > pt; --i) force(seq[i], seq[i - 1]);
      if (conflict) return {false, {}};
    }
    pairs = std::move(rest);
  }

  // endpoint arc classification treats previously forced edges as arcs
  auto effective_arcs = [&]() {
    std::vector<Arc> arcs = g.arcs;
    for (const auto& [e, d] : forced)
      arcs.push_back(d ? Arc{e.first, e.second} : Arc{e.second, e.first});
    return arcs;
  };

  // step 2: a path entered by an arc at one end and left by an arc at the
  // other is forced end to end
  {
    auto arcs = effective_arcs();
    std::vector<int> arc_in(g.n, 0), arc_out(g.n, 0);
    for (const auto& a : arcs) {
      ++arc_out[a.first];
      ++arc_in[a.second];
    }
    auto paths = detail::undirected_paths(g.n, live_edges());
    for (const auto& p : paths) {
      int e1 = p.seq.front(), e2 = p.seq.back();
      bool in1 = arc_in[e1] > 0, out1 = arc_out[e1] > 0;
      bool in2 = arc_in[e2] > 0, out2 = arc_out[e2] > 0;
      if (in1 && out2)
        for (std::size_t i = 0; i + 1 < p.seq.size(); ++i)
          force(p.seq[i], p.seq[i + 1]);
      else if (out1 && in2)
        for (std::size_t i = p.seq.size(); i-- > 1;)
          force(p.seq[i], p.seq[i - 1]);
      if (conflict) return {false, {}};
    }
  }

  auto arcs = effective_arcs();
  detail::ReachOracle oracle(g.n);
  for (const auto& a : arcs) oracle.adj[a.first].push_back(a.second);

  auto paths = detail::undirected_paths(g.n, live_edges());
  std::map<int, std::pair<int, int>> where;
  for (int p = 0; p < (int)paths.size(); ++p)
    for (int i = 0; i < (int)paths[p].seq.size(); ++i)
      where[paths[p].seq[i]] = {p, i};

  // step 3: a two-incoming path cannot launch a source, a two-outgoing path
  // cannot receive a sink
  {
    std::vector<int> arc_in(g.n, 0), arc_out(g.n, 0);
    for (const auto& a : arcs) {
      ++arc_out[a.first];
      ++arc_in[a.second];
    }
    for (int p = 0; p < (int)paths.size(); ++p) {
      int e1 = paths[p].seq.front(), e2 = paths[p].seq.back();
      bool two_in = arc_in[e1] > 0 && arc_in[e2] > 0 && !arc_out[e1] && !arc_out[e2];
      bool two_out = arc_out[e1] > 0 && arc_out[e2] > 0 && !arc_in[e1] && !arc_in[e2];
      if (!two_in && !two_out) continue;
      for (const auto& tp : pairs) {
        auto is_ = where.find(tp.s);
        auto it_ = where.find(tp.t);
        if (two_in && is_ != where.end() && is_->second.first == p)
          return {false, {}};
        if (two_out && it_ != where.end() && it_->second.first == p)
          return {false, {}};
      }
    }
  }

  // step 4: demands touching no path are settled by arc reachability
  {
    std::vector<TerminalPair> rest;
    for (const auto& tp : pairs) {
      bool s_on = where.count(tp.s), t_on = where.count(tp.t);
      if (s_on || t_on) {
        rest.push_back(tp);
        continue;
      }
      if (!oracle.reach(tp.s, tp.t)) return {false, {}};
    }
    pairs = std::move(rest);
  }

  // step 5: one variable per path-resident demand endpoint, true = that
  // endpoint routes through the left end of its path
  struct Occ {
    int var, path, pos;
    bool source;
  };
  TwoSatFormula f;
  std::vector<Occ> occs;
  std::vector<std::pair<int, int>> pair_vars(pairs.size(), {-1, -1});
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto is_ = where.find(pairs[i].s);
    if (is_ != where.end()) {
      pair_vars[i].first = f.vars;
      occs.push_back({f.vars++, is_->second.first, is_->second.second, true});
    }
    auto it_ = where.find(pairs[i].t);
    if (it_ != where.end()) {
      pair_vars[i].second = f.vars;
      occs.push_back({f.vars++, it_->second.first, it_->second.second, false});
    }
  }
  // path consistency
  for (const auto& o1 : occs)
    for (const auto& o2 : occs) {
      if (o1.path != o2.path || o1.source != o2.source) continue;
      if (o1.pos < o2.pos)
        f.add_clause({o1.var, true}, {o2.var, false});
    }
  // terminal consistency
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [vs, vt] = pair_vars[i];
    if (vs >= 0 && vt >= 0) {
      const auto& ps = paths[where[pairs[i].s].first].seq;
      const auto& pt = paths[where[pairs[i].t].first].seq;
      int li = ps.front(), ri = ps.back(), lj = pt.front(), rj = pt.back();
      if (!oracle.reach(li, lj)) f.add_clause({vs, false}, {vt, false});
      if (!oracle.reach(ri, lj)) f.add_clause({vs, true}, {vt, false});
      if (!oracle.reach(li, rj)) f.add_clause({vs, false}, {vt, true});
      if (!oracle.reach(ri, rj)) f.add_clause({vs, true}, {vt, true});
    } else if (vs >= 0) {
      const auto& ps = paths[where[pairs[i].s].first].seq;
      if (!oracle.reach(ps.front(), pairs[i].t)) f.add_unary({vs, false});
      if (!oracle.reach(ps.back(), pairs[i].t)) f.add_unary({vs, true});
    } else if (vt >= 0) {
      const auto& pt = paths[where[pairs[i].t].first].seq;
      if (!oracle.reach(pairs[i].s, pt.front())) f.add_unary({vt, false});
      if (!oracle.reach(pairs[i].s, pt.back())) f.add_unary({vt, true});
    }
  }
  auto assign = solve_2sat(f);
  if (!assign) return {false, {}};

  // step 6: realize the chosen endpoints, then default low -> high
  for (const auto& o : occs) {
    const auto& seq = paths[o.path].seq;
    bool left = (*assign)[o.var];
    if (o.source) {
      if (left)
        for (int i = o.pos; i > 0; --i) force(seq[i], seq[i - 1]);
      else
        for (int i = o.pos; i + 1 < (int)seq.size(); ++i)
          force(seq[i], seq[i + 1]);
    } else {
      if (left)
        for (int i = 0; i < o.pos; ++i) force(seq[i], seq[i + 1]);
      else
        for (int i = (int)seq.size() - 1; i > o.pos; --i)
          force(seq[i], seq[i - 1]);
    }
  }
  if (conflict)
    throw std::logic_error("solve_restricted: inconsistent reconstruction");

  Orientation o;
  for (const auto& e : g.edges) {
    auto it = forced.find(e);
    o.dir[e] = (it == forced.end()) ? true : it->second;
  }
  return {true, o};
}

struct BranchStats {
  long long leaves = 0;
  int max_depth = 0;
};

struct ArcsFptResult {
  Verdict verdict;  // witness orients the preprocessed instance
  BranchStats stats;
  PreprocessReport pre;
};

// FPT in the number of arcs: preprocess to a fixpoint, orient every edge
// incident to a vertex that breaks the restricted form (depth-first, low ids
// and low -> high direction first), and solve each restricted leaf. Since
// orienting an edge of a mixed acyclic instance cannot close a cycle, every
// leaf stays mixed acyclic.
inline ArcsFptResult solve_arcs_fpt(
    const Instance& inst,
    const std::function<void(const Instance&)>& leaf_observer = nullptr) {
  ArcsFptResult res;
  res.pre = preprocess_fixpoint(inst);
  if (res.pre.verdict == Early::No) return res;
  const Instance& base = res.pre.instance;
  if (res.pre.verdict == Early::Yes) {
    Orientation o;
    for (const auto& e : base.graph.edges) o.dir[e] = true;
    res.verdict = {true, o};
    return res;
  }

  std::vector<int> deg_e(base.graph.n, 0), deg_a(base.graph.n, 0);
  std::vector<std::vector<int>> enb(base.graph.n);
  for (const auto& e : base.graph.edges) {
    ++deg_e[e.first];
    ++deg_e[e.second];
    enb[e.first].push_back(e.second);
    enb[e.second].push_back(e.first);
  }
  for (const auto& a : base.graph.arcs) {
    ++deg_a[a.first];
    ++deg_a[a.second];
  }
  std::vector<Edge> branch;
  std::set<Edge> listed;
  for (int v = 0; v < base.graph.n; ++v) {
    if (!(deg_e[v] > 0 && deg_e[v] + deg_a[v] >= 3)) continue;
    std::sort(enb[v].begin(), enb[v].end());
    for (int w : enb[v]) {
      Edge e = make_edge(v, w);
      if (listed.insert(e).second) branch.push_back(e);
    }
  }

  std::map<Edge, bool> chosen;
  std::function<std::optional<Orientation>(std::size_t)> rec =
      [&](std::size_t i) -> std::optional<Orientation> {
    res.stats.max_depth = std::max(res.stats.max_depth, (int)i);
    if (i == branch.size()) {
      ++res.stats.leaves;
      Instance leaf = base;
      std::vector<Edge> keep;
      for (const auto& e : leaf.graph.edges)
        if (!chosen.count(e)) keep.push_back(e);
      leaf.graph.edges = std::move(keep);
      for (const auto& [e, d] : chosen)
        leaf.graph.arcs.push_back(d ? Arc{e.first, e.second}
                                    : Arc{e.second, e.first});
      normalize(leaf);
      if (leaf_observer) leaf_observer(leaf);
      Verdict v = solve_restricted(leaf);
      if (!v.yes) return std::nullopt;
      Orientation full = *v.witness;
      for (const auto& [e, d] : chosen) full.dir[e] = d;
      return full;
    }
    for (bool d : {true, false}) {
      chosen[branch[i]] = d;
      if (auto w = rec(i + 1)) return w;
    }
    chosen.erase(branch[i]);
    return std::nullopt;
  };
  auto w = rec(0);
  res.verdict = w ? Verdict{true, std::move(*w)} : Verdict{false, {}};
  return res;
}

namespace detail {

// Minimum number of unoriented edges on any mixed s -> t path, with the
// unoriented edges of one such path, via 0-1 BFS. nullopt if unreachable.
inline std::optional<std::pair<int, std::vector<Edge>>> min_undirected_path(
    int n, const std::vector<Arc>& arcs, const std::vector<Edge>& undirected,
    int s, int t) {
  struct Step {
    int to;
    int cost;
    Edge via;  // meaningful iff cost == 1
  };
  std::vector<std::vector<Step>> adj(n);
  for (const auto& a : arcs) adj[a.first].push_back({a.second, 0, {}});
  for (const auto& e : undirected) {
    adj[e.first].push_back({e.second, 1, e});
    adj[e.second].push_back({e.first, 1, e});
  }
  const int INF = 1 << 30;
  std::vector<int> dist(n, INF);
  std::vector<std::pair<int, Edge>> par(n, {-1, {}});
  std::vector<char> par_edge(n, 0);
  std::deque<int> q{s};
  dist[s] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (const auto& st : adj[v]) {
      int nd = dist[v] + st.cost;
      if (nd < dist[st.to]) {
        dist[st.to] = nd;
        par[st.to] = {v, st.via};
        par_edge[st.to] = st.cost == 1;
        if (st.cost == 0)
          q.push_front(st.to);
        else
          q.push_back(st.to);
      }
    }
  }
  if (dist[t] >= INF) return std::nullopt;
  std::vector<Edge> used;
  for (int v = t; v != s;) {
    if (par_edge[v]) used.push_back(par[v].second);
    v = par[v].first;
  }
  return std::make_pair(dist[t], used);
}

inline bool clique_after_deletion(const MixedGraph& g,
                                  const std::set<int>& removed) {
  MixedGraph u = underlying_graph(g);
  std::vector<int> rest;
  for (int v = 0; v < g.n; ++v)
    if (!removed.count(v)) rest.push_back(v);
  for (std::size_t i = 0; i < rest.size(); ++i)
    for (std::size_t j = i + 1; j < rest.size(); ++j)
      if (!u.has_edge(rest[i], rest[j])) return false;
  return true;
}

}  // namespace detail

// FPT in the distance to a clique: enumerate orientations of the few edges
// touching the modulator; in the clique remainder the undirected edges form a
// matching and each unsatisfied demand pins down a single special edge whose
// orientation it forces.
inline Verdict solve_dtc(const Instance& inst,
                         const std::vector<int>& modulator) {
  if (!is_mixed_acyclic(inst.graph))
    throw std::logic_error("solve_dtc: instance has a mixed cycle");
  std::set<int> mod(modulator.begin(), modulator.end());
  if (!detail::clique_after_deletion(inst.graph, mod))
    throw std::logic_error("solve_dtc: remainder is not a clique");

  const auto& g = inst.graph;
  std::vector<Edge> outer, inner;
  for (const auto& e : g.edges)
    (mod.count(e.first) || mod.count(e.second) ? outer : inner).push_back(e);

  std::vector<TerminalPair> pairs;
  for (const auto& tp : inst.terminals)
    if (tp.s != tp.t) pairs.push_back(tp);

  const int mo = (int)outer.size();
  if (mo > 62)
    throw RefusalError("solve_dtc: " + std::to_string(mo) +
                       " modulator-incident edges are too many to enumerate");
  for (std::uint64_t mask = 0; mask < (1ULL << mo); ++mask) {
    std::map<Edge, bool> forced;
    for (int i = 0; i < mo; ++i)
      forced[outer[i]] = ((mask >> (mo - 1 - i)) & 1) == 0;

    auto arcs_now = [&]() {
      std::vector<Arc> arcs = g.arcs;
      for (const auto& [e, d] : forced)
        arcs.push_back(d ? Arc{e.first, e.second} : Arc{e.second, e.first});
      return arcs;
    };
    auto reach_arcs = [&](int s, int t) {
      detail::ReachOracle o(g.n);
      for (const auto& a : arcs_now()) o.adj[a.first].push_back(a.second);
      return o.reach(s, t);
    };

    bool ok = true;
    for (const auto& tp : pairs) {
      if (reach_arcs(tp.s, tp.t)) continue;
      std::vector<Edge> free;
      for (const auto& e : inner)
        if (!forced.count(e)) free.push_back(e);
      auto best =
          detail::min_undirected_path(g.n, arcs_now(), free, tp.s, tp.t);
      if (!best) {
        ok = false;
        break;
      }
      if (best->first != 1)
        throw std::logic_error("solve_dtc: demand needs more than one edge");
      Edge e = best->second.front();
      auto with = [&](bool d) {
        auto arcs = arcs_now();
        arcs.push_back(d ? Arc{e.first, e.second} : Arc{e.second, e.first});
        detail::ReachOracle o(g.n);
        for (const auto& a : arcs) o.adj[a.first].push_back(a.second);
        return o.reach(tp.s, tp.t);
      };
      bool fwd = with(true), bwd = with(false);
      if (fwd && bwd) continue;  // satisfied either way, leave e free
      if (fwd)
        forced[e] = true;
      else if (bwd)
        forced[e] = false;
      else {
        ok = false;
        break;
      }
    }
    if (ok) {
      Orientation o;
      for (const auto& e : g.edges) {
        auto it = forced.find(e);
        o.dir[e] = (it == forced.end()) ? true : it->second;
      }
      return {true, o};
    }
  }
  return {false, {}};
}

// XP in the vertex cover: orient the cover-internal edges, guess one length-2
// connector per ordered cover pair, then settle demands source-first; a
// demand graph cycle kills the branch.
inline Verdict solve_vc_xp(const Instance& inst,
                           const std::vector<int>& cover) {
  if (!is_mixed_acyclic(inst.graph))
    throw std::logic_error("solve_vc_xp: instance has a mixed cycle");
  SimpleGraph under = SimpleGraph::from_underlying(inst.graph);
  if (!is_vertex_cover(under, cover))
    throw std::logic_error("solve_vc_xp: cover does not cover all edges");
  if ((int)cover.size() > 6)
    throw RefusalError("solve_vc_xp: cover of size " +
                       std::to_string(cover.size()) + " exceeds the cap of 6");

  const auto& g = inst.graph;
  std::set<int> S(cover.begin(), cover.end());
  std::vector<Edge> cover_edges, fringe_edges;
  for (const auto& e : g.edges)
    (S.count(e.first) && S.count(e.second) ? cover_edges : fringe_edges)
        .push_back(e);

  std::vector<int> sorted_cover(S.begin(), S.end());
  struct MiddleSlot {
    int u, v;
    std::vector<int> cands;  // middle vertices outside the cover
  };
  std::vector<MiddleSlot> slots;
  double space = 1.0;
  for (int u : sorted_cover)
    for (int v : sorted_cover) {
      if (u == v) continue;
      MiddleSlot slot{u, v, {}};
      for (int w = 0; w < g.n; ++w) {
        if (S.count(w)) continue;
        bool in_ok = g.has_arc(u, w) || g.has_edge(u, w);
        bool out_ok = g.has_arc(w, v) || g.has_edge(w, v);
        if (in_ok && out_ok) slot.cands.push_back(w);
      }
      space *= 1.0 + slot.cands.size();
      slots.push_back(std::move(slot));
    }
  if (space > 1e8)
    throw RefusalError("solve_vc_xp: middle enumeration space exceeds 1e8");

  std::vector<TerminalPair> all_pairs;
  for (const auto& tp : inst.terminals)
    if (tp.s != tp.t) all_pairs.push_back(tp);

  // inner polynomial phase for a fixed set of guessed orientations
  auto inner = [&](std::map<Edge, bool> forced) -> std::optional<Orientation> {
    auto reach = [&](int s, int t) {
      detail::ReachOracle o(g.n);
      for (const auto& a : g.arcs) o.adj[a.first].push_back(a.second);
      for (const auto& [e, d] : forced)
        o.adj[d ? e.first : e.second].push_back(d ? e.second : e.first);
      return o.reach(s, t);
    };
    std::vector<TerminalPair> demands = all_pairs;
    while (!demands.empty()) {
      // drop what the current orientation already satisfies
      std::vector<TerminalPair> left;
      for (const auto& d : demands)
        if (!reach(d.s, d.t)) left.push_back(d);
      demands = std::move(left);
      if (demands.empty()) break;
      // a source that is no other demand's sink must exist in a feasible branch
      int pick = -1;
      for (std::size_t i = 0; i < demands.size() && pick < 0; ++i) {
        bool blocked = false;
        for (std::size_t j = 0; j < demands.size(); ++j)
          if (j != i && demands[j].t == demands[i].s) blocked = true;
        if (!blocked) pick = (int)i;
      }
      if (pick < 0) return std::nullopt;  // demand cycle
      auto [s, t] = demands[pick];
      auto orient_all = [&](int x, bool outward) {
        for (const auto& e : fringe_edges) {
          if (e.first != x && e.second != x) continue;
          if (forced.count(e)) continue;
          int other = e.first == x ? e.second : e.first;
          forced[e] = outward ? (x == e.first) : (other == e.first);
        }
      };
      if (!S.count(s)) orient_all(s, true);
      if (reach(s, t)) {
        demands.erase(demands.begin() + pick);
        continue;
      }
      if (!S.count(t)) orient_all(t, false);
      if (reach(s, t)) {
        demands.erase(demands.begin() + pick);
        continue;
      }
      return std::nullopt;
    }
    Orientation o;
    for (const auto& e : g.edges) {
      auto it = forced.find(e);
      o.dir[e] = (it == forced.end()) ? true : it->second;
    }
    return o;
  };

  const int mc = (int)cover_edges.size();
  std::optional<Orientation> found;
  for (std::uint64_t mask = 0; mask < (1ULL << mc) && !found; ++mask) {
    std::map<Edge, bool> outer;
    for (int i = 0; i < mc; ++i)
      outer[cover_edges[i]] = ((mask >> (mc - 1 - i)) & 1) == 0;

    std::function<bool(std::size_t, std::map<Edge, bool>&)> mid =
        [&](std::size_t si, std::map<Edge, bool>& forced) -> bool {
      if (si == slots.size()) {
        if (auto w = inner(forced)) {
          found = std::move(w);
          return true;
        }
        return false;
      }
      const auto& slot = slots[si];
      if (mid(si + 1, forced)) return true;  // guess: no 2-path via this pair
      for (int w : slot.cands) {
        std::vector<std::pair<Edge, bool>> added;
        bool fail = false;
        auto try_force = [&](int from, int to) {
          if (g.has_arc(from, to)) return;  // already an arc
          Edge e = make_edge(from, to);
          bool dir = from == e.first;
          auto it = forced.find(e);
          if (it != forced.end()) {
            if (it->second != dir) fail = true;
            return;
          }
          forced[e] = dir;
          added.push_back({e, dir});
        };
        try_force(slot.u, w);
        if (!fail) try_force(w, slot.v);
        if (!fail && mid(si + 1, forced)) return true;
        for (auto& [e, d] : added) forced.erase(e);
      }
      return false;
    };
    std::map<Edge, bool> forced = outer;
    mid(0, forced);
  }
  return found ? Verdict{true, std::move(*found)} : Verdict{false, {}};
}

namespace detail {

inline constexpr const char* kMso2Formulas =
    "% formulas (free edge-set variable: S)\n"
    "(forall-edge e (implies (in e S) (t1 e)))\n"
    "(not (exists-edge e1 (exists-edge e2 (exists-vertex x (exists-vertex y "
    "(and (in e1 S) (in e2 S) (edge e1 x y) (edge e2 y x)))))))\n"
    "(forall-edge e (forall-vertex s (forall-vertex t (implies (and (t2 e) "
    "(edge e s t)) (not (exists-vertexset X (and (in s X) (not (in t X)) "
    "(not (exists-edge f (exists-vertex a (exists-vertex b (and (in f S) "
    "(in a X) (not (in b X)) (edge f a b)))))))))))))\n";

}  // namespace detail

// Relational facts of the augmented structure (type-1 arcs: original arcs and
// both directions of each edge; type-2 arcs: one per terminal pair) followed
// by the fixed sentences; the formula section does not depend on the
// instance.
inline std::string emit_mso2(const Instance& inst) {
  for (const auto& a : inst.graph.arcs)
    if (inst.graph.has_arc(a.second, a.first))
      throw std::logic_error("emit_mso2: anti-parallel arcs present");
  std::ostringstream out;
  out << "% structure\n";
  int id = 1;
  auto fact = [&](int u, int v, int type) {
    out << "edge(e" << id << ", v" << u + 1 << ", v" << v + 1 << ").\n";
    out << 't' << type << "(e" << id << ").\n";
    ++id;
  };
  for (const auto& a : inst.graph.arcs) fact(a.first, a.second, 1);
  for (const auto& e : inst.graph.edges) {
    fact(e.first, e.second, 1);
    fact(e.second, e.first, 1);
  }
  for (const auto& tp : inst.terminals) fact(tp.s, tp.t, 2);
  out << detail::kMso2Formulas;
  return out.str();
}

}  // namespace steiner
