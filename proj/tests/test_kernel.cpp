#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "steiner/kernel.hpp"
#include "steiner/solvers.hpp"
#include "test_util.hpp"

using namespace steiner;
using namespace testutil;

TEST_CASE("poly kernel: nothing to discard when I_N is empty") {
  // path 0 - 1 - 2 with both ends terminals: cover {1}, I_T = {0, 2}
  Instance i = inst_of(3, {{0, 1}, {1, 2}}, {}, {{0, 2}});
  auto res = kernelize_poly(i);
  CHECK(res.instance.graph.n == i.graph.n);
  CHECK(res.ctx.independent_nonterminals.empty());
  CHECK(res.instance.terminals == i.terminals);
}

TEST_CASE("poly kernel: one connector kept per cover pair") {
  // cover pair (0, 2) has two interchangeable connectors 1 and 3, each an
  // edge-then-arc path; a demand far away keeps 0/2 out of I_T
  Instance i = inst_of(6, {{0, 1}, {0, 3}}, {{1, 2}, {3, 2}, {4, 5}},
                       {{4, 5}});
  REQUIRE(is_mixed_acyclic(i.graph));
  auto res = kernelize_poly(i, std::vector<int>{0, 2, 4});
  CHECK(res.ctx.x_pairs == std::vector<std::pair<int, int>>{{0, 2}});
  CHECK(res.ctx.i_prime.size() == 1);  // exactly one of {1, 3}
  CHECK(res.instance.graph.n == 5);
  CHECK(solve_brute(res.instance).yes == solve_brute(i).yes);
}

TEST_CASE("poly kernel preserves the brute-force verdict") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Instance i = corpus_instance(seed * 43 + 17);
    auto res = kernelize_poly(i);
    CHECK(solve_brute(res.instance).yes == solve_brute(i).yes);
  }
}

TEST_CASE("poly kernel output is an induced sub-instance of its input") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    Instance i = corpus_instance(seed * 47 + 29);
    auto res = kernelize_poly(i);
    // reconstruct the post-contraction, post-shortcut instance the kernel
    // was cut from
    Instance work = add_shortcut_arcs(res.ctx.pre.instance, res.ctx.cover);
    const auto& kept = res.ctx.kept;
    for (const auto& e : res.instance.graph.edges)
      CHECK(work.graph.has_edge(kept[e.first], kept[e.second]));
    for (const auto& a : res.instance.graph.arcs)
      CHECK(work.graph.has_arc(kept[a.first], kept[a.second]));
    // and nothing between kept vertices was dropped
    for (const auto& e : work.graph.edges) {
      auto pos_of = [&](int v) {
        auto it = std::lower_bound(kept.begin(), kept.end(), v);
        return (it != kept.end() && *it == v) ? int(it - kept.begin()) : -1;
      };
      int a = pos_of(e.first), b = pos_of(e.second);
      if (a >= 0 && b >= 0) CHECK(res.instance.graph.has_edge(a, b));
    }
  }
}

TEST_CASE("poly kernel size bounds") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Instance i = corpus_instance(seed * 53 + 31);
    auto res = kernelize_poly(i);
    long long s = (long long)res.ctx.cover.size();
    long long k = (long long)res.ctx.pre.instance.terminals.size();
    CHECK((long long)res.ctx.x_pairs.size() <= s * (s - 1));
    CHECK((long long)res.ctx.i_prime.size() <= (long long)res.ctx.x_pairs.size());
    if (res.ctx.cover_exact) {
      // |V| <= |S| + 2k + |S|^2/2
      CHECK(2 * (long long)res.instance.graph.n <= 2 * s + 4 * k + s * s);
    }
    CHECK((long long)res.ctx.i_prime.size() < 4 * s * s + 1);
  }
}

TEST_CASE("poly kernel: matched pairs never contain both (u,v) and (v,u)") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Instance i = corpus_instance(seed * 59 + 41);
    auto res = kernelize_poly(i);
    // rebuild H and the matching deterministically to inspect matched pairs
    Instance work = add_shortcut_arcs(res.ctx.pre.instance, res.ctx.cover);
    const auto& xp = res.ctx.x_pairs;
    const auto& in = res.ctx.independent_nonterminals;
    BipartiteGraph h;
    h.left = (int)xp.size();
    h.right = (int)in.size();
    for (int j = 0; j < h.left; ++j)
      for (int wi = 0; wi < h.right; ++wi)
        if (steiner::detail::connects_pair(work.graph, xp[j].first, in[wi],
                                           xp[j].second))
          h.edges.push_back({j, wi});
    Matching m = max_bipartite_matching(h);
    std::set<std::pair<int, int>> matched;
    for (auto& [j, wi] : m.pairs) matched.insert(xp[j]);
    for (auto& [u, v] : matched) CHECK_FALSE(matched.count({v, u}));
  }
}

TEST_CASE("poly kernel is idempotent given the same cover") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    Instance i = corpus_instance(seed * 61 + 43);
    auto first = kernelize_poly(i);
    // map the cover into kernel coordinates
    std::vector<int> cover2;
    const auto& kept = first.ctx.kept;
    for (int v : first.ctx.cover) {
      auto it = std::lower_bound(kept.begin(), kept.end(), v);
      REQUIRE(it != kept.end());
      cover2.push_back(int(it - kept.begin()));
    }
    auto second = kernelize_poly(first.instance, cover2);
    CHECK(second.instance == first.instance);
  }
}

TEST_CASE("exp kernel: under-populated types survive whole") {
  Instance i = inst_of(4, {{0, 1}}, {{2, 3}}, {{2, 3}});
  Instance out = kernelize_exp(i);
  CHECK(out.terminals.size() == 1);
}

TEST_CASE("exp kernel: six identical pairs cut to four") {
  // cover {0, 1}; six sources wired 0 -> s_i (arc), six sinks t_i -> 1 (arc);
  // all sources share a type, all sinks share a type
  std::vector<Arc> arcs;
  std::vector<TerminalPair> pairs;
  for (int j = 0; j < 6; ++j) {
    int s = 2 + 2 * j, t = 3 + 2 * j;
    arcs.push_back({0, s});
    arcs.push_back({t, 1});
    pairs.push_back({s, t});
  }
  // one edge keeps {0,1} a meaningful cover
  Instance i = inst_of(14, {{0, 1}}, std::move(arcs), std::move(pairs));
  Instance out = kernelize_exp(i, std::vector<int>{0, 1});
  CHECK(out.terminals.size() == 4);
  // exactly the four lowest-index pairs survive, and orphaned terminals leave
  CHECK(out.graph.n == 2 + 8);
  CHECK(solve_brute(out).yes == solve_brute(i).yes);
}

TEST_CASE("exp kernel: overlapping terminals are refused") {
  Instance i = inst_of(3, {}, {{0, 1}, {1, 2}}, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(kernelize_exp(i), RefusalError);
}

TEST_CASE("exp kernel preserves the verdict on non-overlapping instances") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Instance i = nonoverlap_instance(seed * 67 + 3);
    auto poly = kernelize_poly(i);
    // contraction may merge terminals; skip those (overlap precondition)
    std::map<int, int> occ;
    bool overlap = false;
    for (const auto& tp : poly.instance.terminals) {
      if (++occ[tp.s] > 1) overlap = true;
      if (++occ[tp.t] > 1) overlap = true;
    }
    if (overlap) continue;
    std::vector<int> cover2;
    for (int v : poly.ctx.cover) {
      auto it = std::lower_bound(poly.ctx.kept.begin(), poly.ctx.kept.end(), v);
      cover2.push_back(int(it - poly.ctx.kept.begin()));
    }
    Instance out = kernelize_exp(poly.instance, cover2);
    CHECK(solve_brute(out).yes == solve_brute(i).yes);
  }
}

TEST_CASE("exp kernel: observed pair type count stays under the ceiling") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Instance i = nonoverlap_instance(seed * 71 + 9);
    auto poly = kernelize_poly(i);
    std::map<int, int> occ;
    bool overlap = false;
    for (const auto& tp : poly.instance.terminals) {
      if (++occ[tp.s] > 1 || ++occ[tp.t] > 1) overlap = true;
    }
    if (overlap) continue;
    long long s = (long long)poly.ctx.cover.size();
    if (s > 12) continue;
    // count distinct (source signature, sink signature) pairs independently
    const Instance& inst = poly.instance;
    std::set<int> S;
    for (int v : poly.ctx.cover) {
      auto it = std::lower_bound(poly.ctx.kept.begin(), poly.ctx.kept.end(), v);
      S.insert(int(it - poly.ctx.kept.begin()));
    }
    auto sig = [&](int v) {
      if (S.count(v)) return std::string("cover ") + std::to_string(v);
      std::string out = "e";
      for (const auto& e : inst.graph.edges) {
        if (e.first == v) out += " " + std::to_string(e.second);
        if (e.second == v) out += " " + std::to_string(e.first);
      }
      out += " i";
      for (const auto& a : inst.graph.arcs)
        if (a.second == v) out += " " + std::to_string(a.first);
      out += " o";
      for (const auto& a : inst.graph.arcs)
        if (a.first == v) out += " " + std::to_string(a.second);
      return out;
    };
    std::set<std::pair<std::string, std::string>> types;
    for (const auto& tp : inst.terminals)
      types.insert({sig(tp.s), sig(tp.t)});
    long long per_side = 2 * (1LL << (2 * s)) + s;  // 2*4^|S| + |S|
    CHECK((long long)types.size() <= per_side * per_side);
  }
}
