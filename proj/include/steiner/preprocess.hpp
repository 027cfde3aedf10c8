#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "steiner/graph_kit.hpp"
#include "steiner/mixed_graph.hpp"

namespace steiner {

enum class Early { Undecided, Yes, No };

// Total map from original vertex ids to reduced ids. Vertices absorbed by a
// contraction or pendant removal map to their absorber's reduced id; vertices
// whose whole group vanished map to -1.
struct ContractionMap {
  std::vector<int> to_new;
  int new_n = 0;
};

struct PreprocessReport {
  Instance instance;
  ContractionMap map;
  std::vector<int> removed;  // original ids that are gone
  Early verdict = Early::Undecided;
  // Directions forced on swallowed edges (original endpoints), recorded so a
  // reduced witness can be lifted back to the original instance. Swallowed
  // edges absent here may be oriented arbitrarily.
  std::map<Edge, Arc> lift;
};

namespace detail {

// Working state for the reduction rules, kept in original coordinates: a
// union-find over original vertices plus per-connection liveness. A mixed
// cycle is a closed walk whose connections are pairwise distinct; a lone
// undirected edge is not a cycle, while an anti-parallel arc pair or an edge
// parallel to an arc is a 2-cycle.
class PreState {
 public:
  explicit PreState(const Instance& inst)
      : orig_(inst),
        uf_(inst.graph.n),
        edge_alive_(inst.graph.edges.size(), 1),
        arc_alive_(inst.graph.arcs.size(), 1),
        deleted_(inst.graph.n, 0),
        terms_(inst.terminals) {
    std::iota(uf_.begin(), uf_.end(), 0);
    drop_trivial_pairs();
  }

  int find(int v) const {
    while (uf_[v] != v) v = uf_[v];
    return v;
  }

  Early verdict() const {
    if (no_instance_) return Early::No;
    for (const auto& tp : terms_)
      if (find(tp.s) != find(tp.t)) return Early::Undecided;
    return Early::Yes;
  }

  bool contract_pass() {
    bool changed = false;
    while (contract_step()) {
      drop_trivial_pairs();
      changed = true;
    }
    return changed;
  }

  bool eliminate_pass() {
    bool changed = false;
    while (!no_instance_ && eliminate_step()) changed = true;
    return changed;
  }

  PreprocessReport report() const {
    PreprocessReport rep;
    rep.verdict = verdict();
    rep.lift = lift_;
    const int n = orig_.graph.n;
    // representative of each surviving group: smallest live original id
    std::map<int, int> min_alive;  // root -> representative
    for (int v = 0; v < n; ++v) {
      if (deleted_[v]) continue;
      int r = find(v);
      auto it = min_alive.find(r);
      if (it == min_alive.end() || v < it->second) min_alive[r] = v;
    }
    std::vector<std::pair<int, int>> reps;  // (representative, root)
    for (auto& [r, mn] : min_alive) reps.push_back({mn, r});
    std::sort(reps.begin(), reps.end());
    std::map<int, int> root_to_new;
    for (int i = 0; i < (int)reps.size(); ++i) root_to_new[reps[i].second] = i;

    rep.map.new_n = (int)reps.size();
    rep.map.to_new.assign(n, -1);
    for (int v = 0; v < n; ++v) {
      auto it = root_to_new.find(find(v));
      if (it != root_to_new.end()) rep.map.to_new[v] = it->second;
    }
    for (int v = 0; v < n; ++v)
      if (deleted_[v]) rep.removed.push_back(v);

    Instance out;
    out.graph.n = rep.map.new_n;
    for (std::size_t i = 0; i < orig_.graph.edges.size(); ++i) {
      if (!edge_alive_[i]) continue;
      const auto& e = orig_.graph.edges[i];
      int a = rep.map.to_new[e.first], b = rep.map.to_new[e.second];
      if (a != b && a >= 0 && b >= 0) out.graph.edges.push_back(make_edge(a, b));
    }
    for (std::size_t i = 0; i < orig_.graph.arcs.size(); ++i) {
      if (!arc_alive_[i]) continue;
      const auto& a = orig_.graph.arcs[i];
      int x = rep.map.to_new[a.first], y = rep.map.to_new[a.second];
      if (x != y && x >= 0 && y >= 0) out.graph.arcs.push_back({x, y});
    }
    for (const auto& tp : terms_) {
      int s = rep.map.to_new[tp.s], t = rep.map.to_new[tp.t];
      if (s != t && s >= 0 && t >= 0) out.terminals.push_back({s, t});
    }
    normalize(out);
    rep.instance = std::move(out);
    return rep;
  }

 private:
  struct Conn {  // live connection in current (group) coordinates
    int a, b;        // group roots; arc a -> b, edge normalized a < b
    bool is_edge;
    std::size_t idx;  // index into the original edge or arc list
  };

  void unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (x > y) std::swap(x, y);
    uf_[y] = x;
  }

  void drop_trivial_pairs() {
    std::vector<TerminalPair> keep;
    for (const auto& tp : terms_)
      if (find(tp.s) != find(tp.t)) keep.push_back(tp);
    terms_ = std::move(keep);
  }

  std::vector<Conn> live_connections() const {
    std::vector<Conn> cs;
    for (std::size_t i = 0; i < orig_.graph.edges.size(); ++i) {
      if (!edge_alive_[i]) continue;
      int a = find(orig_.graph.edges[i].first);
      int b = find(orig_.graph.edges[i].second);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      cs.push_back({a, b, true, i});
    }
    for (std::size_t i = 0; i < orig_.graph.arcs.size(); ++i) {
      if (!arc_alive_[i]) continue;
      int a = find(orig_.graph.arcs[i].first);
      int b = find(orig_.graph.arcs[i].second);
      if (a == b) continue;
      cs.push_back({a, b, false, i});
    }
    return cs;
  }

  // Record that edge index i is traversed away from group `from_root`;
  // resolves original endpoints before any union happens.
  void orient_edge(std::size_t i, int from_root) {
    const Edge& e = orig_.graph.edges[i];
    if (find(e.first) == from_root)
      lift_[e] = {e.first, e.second};
    else
      lift_[e] = {e.second, e.first};
  }

  // BFS path between two groups through the given edge adjacency (assumed
  // acyclic where used). Returns (conn, from-group) steps walking from -> to.
  static std::vector<std::pair<const Conn*, int>> forest_path(
      const std::map<int, std::vector<std::pair<int, const Conn*>>>& adj,
      int from, int to) {
    std::map<int, std::pair<int, const Conn*>> parent;
    std::deque<int> q{from};
    parent[from] = {from, nullptr};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      if (v == to) break;
      auto it = adj.find(v);
      if (it == adj.end()) continue;
      for (auto& [w, c] : it->second)
        if (!parent.count(w)) {
          parent[w] = {v, c};
          q.push_back(w);
        }
    }
    std::vector<std::pair<const Conn*, int>> path;
    int x = to;
    while (x != from) {
      auto [px, pc] = parent.at(x);
      path.push_back({pc, px});
      x = px;
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  // One contraction event; false at the fixpoint.
  bool contract_step() {
    auto cs = live_connections();

    // 1. pair collisions: two connections between one group pair form a
    // mixed 2-cycle unless they are arcs of the same direction
    {
      std::map<std::pair<int, int>, std::vector<const Conn*>> by_pair;
      for (const auto& c : cs) {
        int a = c.a, b = c.b;
        if (a > b) std::swap(a, b);
        by_pair[{a, b}].push_back(&c);
      }
      for (auto& [pr, list] : by_pair) {
        if (list.size() < 2) continue;
        bool fwd = false, bwd = false, has_edge = false;
        for (const Conn* c : list) {
          if (c->is_edge) has_edge = true;
          else if (c->a == pr.first) fwd = true;
          else bwd = true;
        }
        if (!has_edge && !(fwd && bwd)) {
          // parallel same-direction arcs: plain duplicates, keep one
          bool kept = false;
          for (const Conn* c : list) {
            if (!kept) { kept = true; continue; }
            arc_alive_[c->idx] = 0;
          }
          return true;
        }
        // 2-cycle: orient edges so the merged pair is mutually reachable
        bool need_fwd = !fwd, need_bwd = !bwd;
        for (const Conn* c : list) {
          if (!c->is_edge) continue;
          if (need_fwd) { orient_edge(c->idx, pr.first); need_fwd = false; }
          else if (need_bwd) { orient_edge(c->idx, pr.second); need_bwd = false; }
        }
        unite(pr.first, pr.second);
        return true;
      }
    }

    // edge adjacency over groups (simple graph after step 1)
    std::map<int, std::vector<std::pair<int, const Conn*>>> eadj;
    for (const auto& c : cs)
      if (c.is_edge) {
        eadj[c.a].push_back({c.b, &c});
        eadj[c.b].push_back({c.a, &c});
      }

    // 2. undirected cycle: incremental union-find over the edge graph
    {
      std::map<int, int> cuf;
      std::function<int(int)> cfind = [&](int x) {
        while (cuf[x] != x) x = cuf[x];
        return x;
      };
      std::map<int, std::vector<std::pair<int, const Conn*>>> fadj;
      for (const auto& c : cs) {
        if (!c.is_edge) continue;
        if (!cuf.count(c.a)) cuf[c.a] = c.a;
        if (!cuf.count(c.b)) cuf[c.b] = c.b;
        int ra = cfind(c.a), rb = cfind(c.b);
        if (ra != rb) {
          cuf[std::max(ra, rb)] = std::min(ra, rb);
          fadj[c.a].push_back({c.b, &c});
          fadj[c.b].push_back({c.a, &c});
          continue;
        }
        // edge closes an undirected cycle: path a..b in the accepted forest
        auto path = forest_path(fadj, c.a, c.b);
        std::vector<int> members{c.a, c.b};
        for (auto& [conn, from] : path) {
          orient_edge(conn->idx, from);
          members.push_back(from);
        }
        orient_edge(c.idx, c.b);  // close the cycle b -> a
        for (int v : members) unite(v, members[0]);
        return true;
      }
    }

    // E is a forest now; label edge components
    std::map<int, int> comp;
    {
      std::map<int, int> cuf;
      std::function<int(int)> cfind = [&](int x) {
        while (cuf[x] != x) x = cuf[x];
        return x;
      };
      for (const auto& c : cs) {
        if (!cuf.count(c.a)) cuf[c.a] = c.a;
        if (!cuf.count(c.b)) cuf[c.b] = c.b;
        if (c.is_edge) {
          int ra = cfind(c.a), rb = cfind(c.b);
          if (ra != rb) cuf[std::max(ra, rb)] = std::min(ra, rb);
        }
      }
      for (auto& [v, _] : cuf) comp[v] = cfind(v);
    }

    // 3. arc with both endpoint groups in one edge component
    for (const auto& c : cs) {
      if (c.is_edge) continue;
      if (comp.at(c.a) != comp.at(c.b)) continue;
      auto path = forest_path(eadj, c.b, c.a);  // head group -> tail group
      std::vector<int> members{c.a, c.b};
      for (auto& [conn, from] : path) {
        orient_edge(conn->idx, from);
        members.push_back(from);
      }
      for (int v : members) unite(v, members[0]);
      return true;
    }

    // 4. directed cycle among edge components
    {
      std::map<int, std::vector<const Conn*>> cadj;
      for (const auto& c : cs)
        if (!c.is_edge) cadj[comp.at(c.a)].push_back(&c);
      std::map<int, int> state;  // 0 unseen, 1 on path, 2 done
      std::vector<std::pair<int, const Conn*>> path;  // (comp, arc into it)
      std::function<const Conn*(int)> dfs = [&](int v) -> const Conn* {
        state[v] = 1;
        auto it = cadj.find(v);
        if (it != cadj.end())
          for (const Conn* c : it->second) {
            int w = comp.at(c->b);
            if (state[w] == 1) {
              path.push_back({w, c});
              return c;
            }
            if (state[w] == 0) {
              path.push_back({w, c});
              if (const Conn* hit = dfs(w)) return hit;
              path.pop_back();
            }
          }
        state[v] = 2;
        return nullptr;
      };
      for (auto& [cid, _] : cadj) {
        if (state[cid]) continue;
        path.clear();
        path.push_back({cid, nullptr});
        const Conn* back = dfs(cid);
        if (!back) continue;
        int target = path.back().first;
        std::size_t start = 0;
        while (path[start].first != target) ++start;
        std::vector<std::pair<int, const Conn*>> cyc(path.begin() + start,
                                                     path.end() - 1);
        std::vector<int> members;
        for (std::size_t i = 0; i < cyc.size(); ++i) {
          const Conn* in_arc = (i == 0) ? back : cyc[i].second;
          const Conn* out_arc = (i + 1 < cyc.size()) ? cyc[i + 1].second : back;
          int entry = find(orig_.graph.arcs[in_arc->idx].second);
          int exit = find(orig_.graph.arcs[out_arc->idx].first);
          members.push_back(entry);
          members.push_back(exit);
          if (entry != exit)
            for (auto& [conn, from] : forest_path(eadj, entry, exit)) {
              orient_edge(conn->idx, from);
              members.push_back(from);
            }
        }
        for (int v : members) unite(v, members[0]);
        return true;
      }
    }

    return false;
  }

  // One pendant or isolated vertex removal; false at the fixpoint.
  bool eliminate_step() {
    drop_trivial_pairs();
    auto cs = live_connections();
    std::map<int, std::vector<const Conn*>> inc;
    for (const auto& c : cs) {
      inc[c.a].push_back(&c);
      inc[c.b].push_back(&c);
    }
    std::set<int> alive_roots;
    for (int v = 0; v < orig_.graph.n; ++v)
      if (!deleted_[v]) alive_roots.insert(find(v));

    for (int r : alive_roots) {
      auto it = inc.find(r);
      std::size_t deg = it == inc.end() ? 0 : it->second.size();
      if (deg > 1) continue;

      bool src = false, snk = false;
      for (const auto& tp : terms_) {
        if (find(tp.s) == r) src = true;
        if (find(tp.t) == r) snk = true;
      }
      if (deg == 0) {
        if (src || snk) {
          no_instance_ = true;
          return false;
        }
        delete_group(r);
        return true;
      }
      const Conn* c = it->second.front();
      int other = (c->a == r) ? c->b : c->a;
      if (src && snk) {
        no_instance_ = true;
        return false;
      }
      if (!c->is_edge) {
        bool arc_into_r = (c->b == r);
        if ((arc_into_r && src) || (!arc_into_r && snk)) {
          no_instance_ = true;
          return false;
        }
      }
      if (c->is_edge) {
        if (src) orient_edge(c->idx, r);
        else if (snk) orient_edge(c->idx, other);
        edge_alive_[c->idx] = 0;
      } else {
        arc_alive_[c->idx] = 0;
      }
      delete_group(r);
      unite(r, other);  // terminal occurrences of r transfer to the neighbor
      return true;
    }
    return false;
  }

  void delete_group(int root) {
    for (int v = 0; v < orig_.graph.n; ++v)
      if (!deleted_[v] && find(v) == root) deleted_[v] = 1;
  }

  const Instance& orig_;
  std::vector<int> uf_;
  std::vector<char> edge_alive_;
  std::vector<char> arc_alive_;
  std::vector<char> deleted_;
  std::vector<TerminalPair> terms_;
  std::map<Edge, Arc> lift_;
  bool no_instance_ = false;
};

}  // namespace detail

// No mixed cycle: the undirected edges form a forest, no arc joins two
// vertices of one undirected component, and the component digraph is acyclic.
inline bool is_mixed_acyclic(const MixedGraph& g) {
  std::vector<int> uf(g.n);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](int v) {
    while (uf[v] != v) v = uf[v];
    return v;
  };
  for (const auto& e : g.edges) {
    int a = find(e.first), b = find(e.second);
    if (a == b) return false;
    uf[std::max(a, b)] = std::min(a, b);
  }
  std::map<int, int> comp_id;
  for (int v = 0; v < g.n; ++v) {
    int r = find(v);
    if (!comp_id.count(r)) comp_id[r] = (int)comp_id.size();
  }
  Digraph d((int)comp_id.size());
  for (const auto& a : g.arcs) {
    int x = comp_id[find(a.first)], y = comp_id[find(a.second)];
    if (x == y) return false;
    d.add_arc(x, y);
  }
  return topo_order(d).acyclic;
}

// Contract every mixed cycle; answer-preserving, result is mixed acyclic.
inline PreprocessReport contract_cycles(const Instance& inst) {
  detail::PreState st(inst);
  st.contract_pass();
  return st.report();
}

// Remove underlying-degree <= 1 vertices exhaustively; may conclude NO when a
// pendant terminal cannot play its role. Expects a mixed acyclic instance.
inline PreprocessReport eliminate_degree_one(const Instance& inst) {
  if (!is_mixed_acyclic(inst.graph))
    throw std::logic_error("eliminate_degree_one: instance has a mixed cycle");
  detail::PreState st(inst);
  st.eliminate_pass();
  return st.report();
}

// Both rules to a joint fixpoint.
inline PreprocessReport preprocess_fixpoint(const Instance& inst) {
  detail::PreState st(inst);
  while (true) {
    bool c = st.contract_pass();
    if (st.verdict() == Early::No) break;
    bool e = st.eliminate_pass();
    if (st.verdict() == Early::No) break;
    if (!c && !e) break;
  }
  return st.report();
}

// For every ordered cover pair (u, v) with a directed u -> v path in (V, A)
// and neither an arc (u, v) nor an edge {u, v}, add the arc (u, v).
inline Instance add_shortcut_arcs(const Instance& inst,
                                  const std::vector<int>& cover) {
  if (!is_mixed_acyclic(inst.graph))
    throw std::logic_error("add_shortcut_arcs: instance has a mixed cycle");
  Digraph d = Digraph::from_arcs(inst.graph.n, inst.graph.arcs);
  Instance out = inst;
  for (int u : cover) {
    auto reach = reachable(d, u);
    std::set<int> rs(reach.begin(), reach.end());
    for (int v : cover) {
      if (u == v || !rs.count(v)) continue;
      if (out.graph.has_arc(u, v) || out.graph.has_edge(u, v)) continue;
      out.graph.arcs.push_back({u, v});
      std::sort(out.graph.arcs.begin(), out.graph.arcs.end());
    }
  }
  normalize(out);
  return out;
}

// Pull a witness for the reduced instance back to the original one: surviving
// edges copy the reduced direction, swallowed edges follow the recorded
// orientation, everything else points low id -> high id.
inline Orientation lift_orientation(const Instance& original,
                                    const PreprocessReport& rep,
                                    const Orientation& reduced) {
  Orientation full;
  for (const auto& e : original.graph.edges) {
    int a = rep.map.to_new[e.first], b = rep.map.to_new[e.second];
    if (a != b && a >= 0 && b >= 0) {
      Edge re = make_edge(a, b);
      auto it = reduced.dir.find(re);
      if (it != reduced.dir.end()) {
        int from = it->second ? re.first : re.second;
        full.dir[e] = (a == from);
        continue;
      }
    }
    auto lt = rep.lift.find(e);
    if (lt != rep.lift.end())
      full.dir[e] = (lt->second.first == e.first);
    else
      full.dir[e] = true;
  }
  return full;
}

}  // namespace steiner
