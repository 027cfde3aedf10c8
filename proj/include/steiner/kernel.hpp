#pragma once

#include <algorithm>
#include <map>
#include <tuple>
#include <optional>
#include <set>
#include <vector>

#include "steiner/graph_kit.hpp"
#include "steiner/mixed_graph.hpp"
#include "steiner/preprocess.hpp"

namespace steiner {

struct KernelContext {
  PreprocessReport pre;           // cycle contraction applied first
  std::vector<int> cover;         // in contracted coordinates
  bool cover_exact = false;
  std::vector<int> independent_terminals;     // I_T, contracted coordinates
  std::vector<int> independent_nonterminals;  // I_N
  std::vector<std::pair<int, int>> x_pairs;   // X, lexicographic
  std::vector<int> i_prime;                   // matched I_N vertices
  std::vector<int> kept;  // contracted ids kept, ascending; position = new id
};

struct KernelResult {
  Instance instance;
  KernelContext ctx;
};

namespace detail {

// Exact minimum cover when it fits the cap, else the matching 2-approximation.
inline std::pair<std::vector<int>, bool> cover_for_kernel(
    const SimpleGraph& g, int exact_cap = 12) {
  if (auto exact = vertex_cover_exact(g, exact_cap)) return {*exact, true};
  return {vertex_cover_2approx(g), false};
}

// Length-2 mixed connector u - w - v with w independent: at least one side
// undirected (a double arc would have produced a shortcut arc already).
inline bool connects_pair(const MixedGraph& g, int u, int w, int v) {
  bool ee = g.has_edge(u, w) && g.has_edge(v, w);
  bool ea = g.has_edge(u, w) && g.has_arc(w, v);
  bool ae = g.has_arc(u, w) && g.has_edge(v, w);
  return ee || ea || ae;
}

inline Instance induce(const Instance& inst, const std::vector<int>& kept) {
  std::vector<int> new_id(inst.graph.n, -1);
  for (int i = 0; i < (int)kept.size(); ++i) new_id[kept[i]] = i;
  Instance out;
  out.graph.n = (int)kept.size();
  for (const auto& e : inst.graph.edges)
    if (new_id[e.first] >= 0 && new_id[e.second] >= 0)
      out.graph.edges.push_back(make_edge(new_id[e.first], new_id[e.second]));
  for (const auto& a : inst.graph.arcs)
    if (new_id[a.first] >= 0 && new_id[a.second] >= 0)
      out.graph.arcs.push_back({new_id[a.first], new_id[a.second]});
  for (const auto& tp : inst.terminals) {
    if (new_id[tp.s] < 0 || new_id[tp.t] < 0)
      throw std::logic_error("induce: terminal vertex dropped");
    out.terminals.push_back({new_id[tp.s], new_id[tp.t]});
  }
  normalize(out);
  return out;
}

}  // namespace detail

// Polynomial kernel for vertex cover plus terminal count: contract cycles,
// add cover-to-cover shortcut arcs, and keep the cover, the terminal side of
// the independent set, and one matched connector per cover pair that needs
// one. The auxiliary bipartite graph pairs X with candidate connectors and a
// maximum matching selects the survivors.
inline KernelResult kernelize_poly(
    const Instance& inst,
    std::optional<std::vector<int>> use_cover = std::nullopt) {
  KernelResult res;
  res.ctx.pre = contract_cycles(inst);
  Instance work = res.ctx.pre.instance;

  SimpleGraph under = SimpleGraph::from_underlying(work.graph);
  if (use_cover) {
    if (!is_vertex_cover(under, *use_cover))
      throw std::logic_error("kernelize_poly: supplied cover is invalid");
    res.ctx.cover = *use_cover;
    res.ctx.cover_exact = false;
  } else {
    auto [cover, exact] = detail::cover_for_kernel(under);
    res.ctx.cover = std::move(cover);
    res.ctx.cover_exact = exact;
  }
  std::sort(res.ctx.cover.begin(), res.ctx.cover.end());

  work = add_shortcut_arcs(work, res.ctx.cover);

  std::set<int> S(res.ctx.cover.begin(), res.ctx.cover.end());
  std::set<int> terminal_vertices;
  for (const auto& tp : work.terminals) {
    terminal_vertices.insert(tp.s);
    terminal_vertices.insert(tp.t);
  }
  for (int v = 0; v < work.graph.n; ++v) {
    if (S.count(v)) continue;
    if (terminal_vertices.count(v))
      res.ctx.independent_terminals.push_back(v);
    else
      res.ctx.independent_nonterminals.push_back(v);
  }

  const auto& i_n = res.ctx.independent_nonterminals;
  for (int u : res.ctx.cover)
    for (int v : res.ctx.cover) {
      if (u == v) continue;
      if (work.graph.has_arc(u, v) || work.graph.has_edge(u, v)) continue;
      bool witness = false;
      for (int w : i_n)
        if (detail::connects_pair(work.graph, u, w, v)) {
          witness = true;
          break;
        }
      if (witness) res.ctx.x_pairs.push_back({u, v});
    }

  BipartiteGraph h;
  h.left = (int)res.ctx.x_pairs.size();
  h.right = (int)i_n.size();
  for (int j = 0; j < h.left; ++j)
    for (int wi = 0; wi < h.right; ++wi)
      if (detail::connects_pair(work.graph, res.ctx.x_pairs[j].first, i_n[wi],
                                res.ctx.x_pairs[j].second))
        h.edges.push_back({j, wi});
  Matching m = max_bipartite_matching(h);
  for (const auto& [j, wi] : m.pairs) res.ctx.i_prime.push_back(i_n[wi]);
  std::sort(res.ctx.i_prime.begin(), res.ctx.i_prime.end());

  std::set<int> keep(S.begin(), S.end());
  keep.insert(res.ctx.independent_terminals.begin(),
              res.ctx.independent_terminals.end());
  keep.insert(res.ctx.i_prime.begin(), res.ctx.i_prime.end());
  res.ctx.kept.assign(keep.begin(), keep.end());
  res.instance = detail::induce(work, res.ctx.kept);
  return res;
}

// Exponential kernel for instances whose terminal pairs share no vertex:
// classify independent terminals by their exact cover-side neighborhoods and
// role, keep at most four pairs per pair type (lowest indices), and drop the
// independent terminals that no surviving pair mentions. Meant to run on the
// output of kernelize_poly.
inline Instance kernelize_exp(
    const Instance& inst,
    std::optional<std::vector<int>> use_cover = std::nullopt) {
  std::map<int, int> occurrences;
  for (const auto& tp : inst.terminals) {
    ++occurrences[tp.s];
    ++occurrences[tp.t];
  }
  for (const auto& [v, c] : occurrences)
    if (c > 1)
      throw RefusalError(
          "kernelize_exp: vertex " + std::to_string(v + 1) +
          " appears in more than one terminal pair");

  SimpleGraph under = SimpleGraph::from_underlying(inst.graph);
  std::vector<int> cover;
  if (use_cover) {
    if (!is_vertex_cover(under, *use_cover))
      throw std::logic_error("kernelize_exp: supplied cover is invalid");
    cover = *use_cover;
  } else {
    cover = detail::cover_for_kernel(under).first;
  }
  std::set<int> S(cover.begin(), cover.end());

  // vertex signature: cover vertices are singleton types; independent
  // terminals are typed by (edge, in-arc, out-arc) neighborhoods
  struct Sig {
    bool in_cover;
    int self;  // meaningful for cover vertices
    std::vector<int> enb, inb, outb;
    bool operator<(const Sig& o) const {
      return std::tie(in_cover, self, enb, inb, outb) <
             std::tie(o.in_cover, o.self, o.enb, o.inb, o.outb);
    }
  };
  auto signature = [&](int v) {
    Sig s{S.count(v) > 0, 0, {}, {}, {}};
    if (s.in_cover) {
      s.self = v;
      return s;
    }
    for (const auto& e : inst.graph.edges) {
      if (e.first == v) s.enb.push_back(e.second);
      if (e.second == v) s.enb.push_back(e.first);
    }
    for (const auto& a : inst.graph.arcs) {
      if (a.second == v) s.inb.push_back(a.first);
      if (a.first == v) s.outb.push_back(a.second);
    }
    std::sort(s.enb.begin(), s.enb.end());
    std::sort(s.inb.begin(), s.inb.end());
    std::sort(s.outb.begin(), s.outb.end());
    return s;
  };

  std::map<std::pair<Sig, Sig>, std::vector<int>> by_type;
  for (int i = 0; i < (int)inst.terminals.size(); ++i)
    by_type[{signature(inst.terminals[i].s), signature(inst.terminals[i].t)}]
        .push_back(i);

  std::set<int> surviving;
  for (auto& [type, idxs] : by_type)
    for (std::size_t j = 0; j < idxs.size() && j < 4; ++j)
      surviving.insert(idxs[j]);

  Instance out = inst;
  out.terminals.clear();
  std::set<int> used;
  for (int i : surviving) {
    out.terminals.push_back(inst.terminals[i]);
    used.insert(inst.terminals[i].s);
    used.insert(inst.terminals[i].t);
  }
  std::vector<int> kept;
  for (int v = 0; v < inst.graph.n; ++v) {
    bool independent_terminal = !S.count(v) && occurrences.count(v);
    if (independent_terminal && !used.count(v)) continue;
    kept.push_back(v);
  }
  return detail::induce(out, kept);
}

}  // namespace steiner
