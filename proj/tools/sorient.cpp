// sorient: Steiner Orientation solver, preprocessor, kernelizer, and
// instance generator. Exit codes: 0 = YES / success, 1 = NO, 2 = usage or
// refusal, 3 = internal invariant violation.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "steiner/generators.hpp"
#include "steiner/graph_kit.hpp"
#include "steiner/kernel.hpp"
#include "steiner/mixed_graph.hpp"
#include "steiner/preprocess.hpp"
#include "steiner/solvers.hpp"

using namespace steiner;
using nlohmann::json;

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

Instance load_instance(const std::string& path) {
  if (path == "-") return parse_instance(std::cin);
  std::ifstream in(path);
  if (!in) throw RefusalError("cannot open '" + path + "'");
  return parse_instance(in);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SO_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw RefusalError("SO_SEED is not a number");
    }
  }
  return 1;
}

// User-facing ids are 1-based; remap through a preprocessing report and drop
// vertices that merged away.
std::vector<int> remap_user_set(const std::vector<int>& user,
                                const PreprocessReport& rep) {
  std::set<int> out;
  for (int v1 : user) {
    int v = v1 - 1;
    if (v < 0 || v >= (int)rep.map.to_new.size())
      throw RefusalError("vertex id " + std::to_string(v1) + " out of range");
    if (rep.map.to_new[v] >= 0) out.insert(rep.map.to_new[v]);
  }
  return {out.begin(), out.end()};
}

struct SolveOutcome {
  Verdict verdict;  // witness on the input instance
  BranchStats stats;
  std::string algo;
};

SolveOutcome run_algo(const Instance& inst, const std::string& algo,
                      const std::optional<std::vector<int>>& user_modulator,
                      const std::optional<std::vector<int>>& user_cover,
                      int brute_cap) {
  SolveOutcome out;
  out.algo = algo;
  if (algo == "brute") {
    out.verdict = solve_brute(inst, brute_cap);
    return out;
  }
  if (algo == "arcs") {
    auto r = solve_arcs_fpt(inst);
    out.stats = r.stats;
    out.verdict.yes = r.verdict.yes;
    if (r.verdict.yes)
      out.verdict.witness = lift_orientation(inst, r.pre, *r.verdict.witness);
    return out;
  }
  // dtc and vc need a mixed acyclic instance, so preprocess first
  auto rep = preprocess_fixpoint(inst);
  if (rep.verdict == Early::No) {
    out.verdict.yes = false;
    return out;
  }
  if (rep.verdict == Early::Yes) {
    out.verdict.yes = true;
    out.verdict.witness = lift_orientation(inst, rep, Orientation{});
    return out;
  }
  const Instance& base = rep.instance;
  Verdict inner;
  if (algo == "dtc") {
    std::vector<int> modulator;
    if (user_modulator)
      modulator = remap_user_set(*user_modulator, rep);
    else {
      SimpleGraph comp = SimpleGraph::from_underlying(base.graph).complement();
      auto exact = vertex_cover_exact(comp, 32);
      if (!exact) throw RefusalError("no clique modulator of size <= 32 found");
      modulator = *exact;
    }
    std::set<int> mod(modulator.begin(), modulator.end());
    if (!detail::clique_after_deletion(base.graph, mod))
      throw RefusalError("removing the modulator does not leave a clique");
    inner = solve_dtc(base, modulator);
  } else if (algo == "vc") {
    std::vector<int> cover;
    if (user_cover)
      cover = remap_user_set(*user_cover, rep);
    else {
      auto exact =
          vertex_cover_exact(SimpleGraph::from_underlying(base.graph), 6);
      if (!exact) throw RefusalError("no vertex cover of size <= 6 found");
      cover = *exact;
    }
    if (!is_vertex_cover(SimpleGraph::from_underlying(base.graph), cover))
      throw RefusalError("the supplied set is not a vertex cover");
    if (cover.size() > 6)
      throw RefusalError("solve_vc_xp: cover of size " +
                         std::to_string(cover.size()) +
                         " exceeds the cap of 6");
    inner = solve_vc_xp(base, cover);
  } else {
    throw RefusalError("unknown algorithm '" + algo + "'");
  }
  out.verdict.yes = inner.yes;
  if (inner.yes)
    out.verdict.witness = lift_orientation(inst, rep, *inner.witness);
  return out;
}

// Route to the parameter the instance is small in.
std::string pick_auto_algo(const Instance& inst, int brute_cap) {
  if ((int)inst.graph.edges.size() <= 14 &&
      (int)inst.graph.edges.size() <= brute_cap)
    return "brute";
  if (inst.graph.arcs.size() <= 8) return "arcs";
  auto rep = preprocess_fixpoint(inst);
  if (rep.verdict != Early::Undecided) return "arcs";  // decided either way
  SimpleGraph comp = SimpleGraph::from_underlying(rep.instance.graph).complement();
  auto greedy = vertex_cover_2approx(comp);
  if (greedy.size() <= 6) {
    std::set<int> mod(greedy.begin(), greedy.end());
    if (detail::clique_after_deletion(rep.instance.graph, mod)) return "dtc";
  }
  if (vertex_cover_exact(SimpleGraph::from_underlying(rep.instance.graph), 6))
    return "vc";
  throw RefusalError(
      "no algorithm applies under --algo auto; pick one explicitly");
}

int cmd_solve(const std::string& file, std::string algo,
              const std::optional<std::vector<int>>& modulator,
              const std::optional<std::vector<int>>& cover, bool stats,
              int brute_cap) {
  Instance inst = load_instance(file);
  if (cover && cover->size() > 6)
    throw RefusalError("solve_vc_xp: cover of size " +
                       std::to_string(cover->size()) +
                       " exceeds the cap of 6");
  for (const auto& user : {modulator, cover})
    if (user)
      for (int v : *user)
        if (v < 1 || v > inst.graph.n)
          throw RefusalError("vertex id " + std::to_string(v) +
                             " out of range");
  if (algo == "auto") algo = pick_auto_algo(inst, brute_cap);
  SolveOutcome out = run_algo(inst, algo, modulator, cover, brute_cap);
  if (stats) {
    json j{{"leaves", out.stats.leaves}, {"max_depth", out.stats.max_depth}};
    std::cout << j.dump() << '\n';
  }
  if (!out.verdict.yes) return kExitNo;
  if (!check_orientation(inst, *out.verdict.witness)) {
    std::cerr << "internal error: witness failed validation\n";
    return kExitInternal;
  }
  std::cout << serialize_orientation(*out.verdict.witness);
  return kExitYes;
}

int cmd_preprocess(const std::string& file) {
  Instance inst = load_instance(file);
  auto rep = preprocess_fixpoint(inst);
  const char* verdict = rep.verdict == Early::Yes
                            ? "YES"
                            : rep.verdict == Early::No ? "NO" : "UNDECIDED";
  std::cout << "c preprocess: vertices " << inst.graph.n << " -> "
            << rep.instance.graph.n << ", edges " << inst.graph.edges.size()
            << " -> " << rep.instance.graph.edges.size() << ", arcs "
            << inst.graph.arcs.size() << " -> "
            << rep.instance.graph.arcs.size() << ", terminals "
            << inst.terminals.size() << " -> "
            << rep.instance.terminals.size() << "\n";
  std::cout << "c removed vertices: " << rep.removed.size() << "\n";
  std::cout << "c verdict: " << verdict << "\n";
  std::cout << serialize_instance(rep.instance);
  return kExitYes;
}

int cmd_kernelize(const std::string& file, bool exp,
                  const std::string& sidecar_path) {
  Instance inst = load_instance(file);
  auto res = kernelize_poly(inst);
  Instance out = res.instance;
  if (exp) {
    std::vector<int> cover2;
    for (int v : res.ctx.cover) {
      auto it = std::lower_bound(res.ctx.kept.begin(), res.ctx.kept.end(), v);
      cover2.push_back(int(it - res.ctx.kept.begin()));
    }
    out = kernelize_exp(res.instance, cover2);
  }
  json sidecar{{"cover_size", res.ctx.cover.size()},
               {"cover_exact", res.ctx.cover_exact},
               {"x_size", res.ctx.x_pairs.size()},
               {"i_prime_size", res.ctx.i_prime.size()},
               {"kept_pairs", out.terminals.size()}};
  std::cout << serialize_instance(out);
  if (sidecar_path == "-")
    std::cerr << sidecar.dump() << '\n';
  else {
    std::ofstream sf(sidecar_path);
    if (!sf) throw RefusalError("cannot write sidecar '" + sidecar_path + "'");
    sf << sidecar.dump() << '\n';
  }
  return kExitYes;
}

int cmd_generate(const std::string& kind, const std::string& cnf_path,
                 const std::string& clique_path, std::uint64_t seed, int n,
                 double pe, double pa, int k) {
  auto open_file = [](const std::string& p) -> std::unique_ptr<std::ifstream> {
    if (p == "-") return nullptr;  // caller falls back to std::cin
    auto f = std::make_unique<std::ifstream>(p);
    if (!*f) throw RefusalError("cannot open '" + p + "'");
    return f;
  };
  Instance inst;
  if (kind == "sat" || kind == "mono3sat") {
    if (cnf_path.empty()) throw RefusalError("--cnf <file> is required");
    auto f = open_file(cnf_path);
    CnfFormula cnf = parse_dimacs_cnf(f ? *f : std::cin);
    inst = kind == "sat" ? gen_cnf_sat(cnf)
                         : gen_monotone3sat(MonotoneCnf::from(cnf));
  } else if (kind == "clique") {
    if (clique_path.empty()) throw RefusalError("--clique <file> is required");
    auto f = open_file(clique_path);
    inst = gen_multicolored_clique(parse_mcc(f ? *f : std::cin));
  } else if (kind == "random") {
    inst = gen_random(seed, n, pe, pa, k);
  } else {
    throw RefusalError("unknown generator '" + kind + "'");
  }
  std::cout << serialize_instance(inst);
  return kExitYes;
}

int cmd_emit_mso2(const std::string& file) {
  Instance inst = load_instance(file);
  for (const auto& a : inst.graph.arcs)
    if (inst.graph.has_arc(a.second, a.first))
      throw RefusalError(
          "instance has anti-parallel arcs; run `sorient preprocess` first");
  std::cout << emit_mso2(inst);
  return kExitYes;
}

int cmd_crossvalidate(int seeds, int n, double pe, double pa, int kmax,
                      bool as_json, int brute_cap) {
  std::uint64_t base = default_seed();
  json records = json::array();
  int disagreements = 0;
  for (int s = 1; s <= seeds; ++s) {
    Rng rng(base + (std::uint64_t)s * 7919);
    int k = std::min<int>((int)rng.below((std::uint64_t)kmax + 1),
                          n * (n - 1));
    Instance inst = gen_random(rng.next(), n, pe, pa, k);
    if ((int)inst.graph.edges.size() > brute_cap) {
      std::cerr << "profile exceeds the brute-force cap of " << brute_cap
                << " edges\n";
      return kExitUsage;
    }
    json rec{{"seed", s},
             {"n", inst.graph.n},
             {"edges", inst.graph.edges.size()},
             {"arcs", inst.graph.arcs.size()},
             {"k", inst.terminals.size()}};
    auto timed = [&](const char* name, auto&& fn) {
      auto t0 = std::chrono::steady_clock::now();
      bool yes = fn();
      double ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
      rec[name] = {{"yes", yes}, {"ms", ms}};
      return yes;
    };
    bool ref = timed("brute", [&] {
      Verdict v = solve_brute(inst, brute_cap);
      if (v.yes && !check_orientation(inst, *v.witness))
        throw std::logic_error("brute witness invalid");
      return v.yes;
    });
    bool agree = true;
    agree &= ref == timed("arcs", [&] {
               auto r = solve_arcs_fpt(inst);
               if (r.verdict.yes) {
                 Orientation lifted =
                     lift_orientation(inst, r.pre, *r.verdict.witness);
                 if (!check_orientation(inst, lifted))
                   throw std::logic_error("arcs witness invalid");
               }
               return r.verdict.yes;
             });
    auto rep = preprocess_fixpoint(inst);
    if (rep.verdict == Early::Undecided) {
      SimpleGraph under = SimpleGraph::from_underlying(rep.instance.graph);
      auto modulator = vertex_cover_exact(under.complement(), 3);
      if (modulator) {
        agree &= ref == timed("dtc", [&] {
                   Verdict v = solve_dtc(rep.instance, *modulator);
                   if (v.yes) {
                     Orientation lifted =
                         lift_orientation(inst, rep, *v.witness);
                     if (!check_orientation(inst, lifted))
                       throw std::logic_error("dtc witness invalid");
                   }
                   return v.yes;
                 });
      }
      auto cover = vertex_cover_exact(under, 3);
      if (cover) {
        agree &= ref == timed("vc", [&] {
                   Verdict v = solve_vc_xp(rep.instance, *cover);
                   if (v.yes) {
                     Orientation lifted =
                         lift_orientation(inst, rep, *v.witness);
                     if (!check_orientation(inst, lifted))
                       throw std::logic_error("vc witness invalid");
                   }
                   return v.yes;
                 });
      }
    }
    agree &= ref == timed("kernel_brute", [&] {
               auto kr = kernelize_poly(inst);
               Verdict v = solve_brute(kr.instance, brute_cap);
               if (v.yes && !check_orientation(kr.instance, *v.witness))
                 throw std::logic_error("kernel witness invalid");
               return v.yes;
             });
    rec["agree"] = agree;
    records.push_back(rec);
    if (!agree) {
      ++disagreements;
      std::cerr << "disagreement: " << rec.dump() << '\n';
    }
  }
  json report{{"seeds", seeds},
              {"disagreements", disagreements},
              {"records", records}};
  if (as_json)
    std::cout << report.dump(2) << '\n';
  else
    std::cout << "crossvalidate: " << seeds << " seeds, " << disagreements
              << " disagreements\n";
  return disagreements == 0 ? kExitYes : kExitInternal;
}

int cmd_bench(const std::string& dir, int brute_cap) {
  std::cout << "file,algo,verdict,ms,leaves\n";
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    Instance inst;
    try {
      std::ifstream in(path);
      inst = parse_instance(in);
    } catch (const std::exception& e) {
      std::cerr << "warning: skipping " << path.string() << ": " << e.what()
                << '\n';
      continue;
    }
    auto row = [&](const char* algo, bool yes, double ms,
                   std::optional<long long> leaves) {
      std::cout << path.filename().string() << ',' << algo << ','
                << (yes ? "YES" : "NO") << ',' << ms << ',';
      if (leaves) std::cout << *leaves;
      std::cout << '\n';
    };
    if ((int)inst.graph.edges.size() <= brute_cap) {
      auto t0 = std::chrono::steady_clock::now();
      Verdict v = solve_brute(inst, brute_cap);
      double ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
      row("brute", v.yes, ms, std::nullopt);
    }
    {
      auto t0 = std::chrono::steady_clock::now();
      auto r = solve_arcs_fpt(inst);
      double ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
      row("arcs", r.verdict.yes, ms, r.stats.leaves);
    }
  }
  return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steiner Orientation toolkit"};
  app.require_subcommand(1);

  std::string file, algo = "auto", sidecar = "-";
  std::vector<int> modulator, cover;
  bool stats = false, exp = false, as_json = false;
  int brute_cap = 24;

  auto* solve = app.add_subcommand("solve", "decide an instance file");
  solve->add_option("file", file, "instance file, or - for stdin")->required();
  solve->add_option("--algo", algo, "brute|arcs|dtc|vc|auto")
      ->check(CLI::IsMember({"brute", "arcs", "dtc", "vc", "auto"}));
  solve->add_option("--modulator", modulator,
                    "clique modulator, 1-based ids (dtc)")
      ->delimiter(',');
  solve->add_option("--cover", cover, "vertex cover, 1-based ids (vc; cap 6)")
      ->delimiter(',');
  solve->add_flag("--stats", stats, "print branch statistics as JSON");
  solve->add_option("--brute-cap", brute_cap, "edge cap for brute force");

  auto* prep =
      app.add_subcommand("preprocess", "contract cycles, drop pendants");
  prep->add_option("file", file, "instance file, or - for stdin")->required();

  auto* kern = app.add_subcommand("kernelize", "shrink to a kernel");
  kern->add_option("file", file, "instance file, or - for stdin")->required();
  kern->add_flag("--exp", exp,
                 "apply the non-overlapping-terminals kernel too");
  kern->add_option("--sidecar", sidecar,
                   "path for the JSON sidecar (default: stderr)");

  std::string kind, cnf_path, clique_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int n = 10, k = 3;
  double pe = 0.2, pa = 0.2;
  auto* gen = app.add_subcommand("generate", "produce instances");
  gen->add_option("kind", kind, "sat|mono3sat|clique|random")->required();
  gen->add_option("--cnf", cnf_path, "DIMACS cnf input, or - for stdin");
  gen->add_option("--clique", clique_path, "p mcc input, or - for stdin");
  gen->add_option("--seed", seed, "random seed (default: SO_SEED or 1)")
      ->each([&](const std::string&) { seed_set = true; });
  gen->add_option("--n", n, "vertex count (random)");
  gen->add_option("--pe", pe, "edge probability (random)");
  gen->add_option("--pa", pa, "arc probability (random)");
  gen->add_option("--k", k, "terminal pairs (random)");

  auto* mso = app.add_subcommand(
      "emit-mso2", "emit the relational structure and fixed formulas");
  mso->add_option("file", file, "instance file, or - for stdin")->required();

  int seeds = 100, cv_n = 10, cv_k = 4;
  double cv_pe = 0.15, cv_pa = 0.25;
  auto* cv =
      app.add_subcommand("crossvalidate", "all solvers against brute force");
  cv->add_option("--seeds", seeds, "number of random instances");
  cv->add_option("--n", cv_n, "vertices per instance");
  cv->add_option("--pe", cv_pe, "edge probability");
  cv->add_option("--pa", cv_pa, "arc probability");
  cv->add_option("--k", cv_k, "max terminal pairs");
  cv->add_flag("--json", as_json, "emit the full JSON report");
  cv->add_option("--brute-cap", brute_cap, "edge cap for brute force");

  std::string dir;
  auto* bench = app.add_subcommand("bench", "time solvers over a directory");
  bench->add_option("dir", dir, "directory of instance files")->required();
  bench->add_option("--brute-cap", brute_cap, "edge cap for brute force");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed())
      return cmd_solve(
          file, algo,
          modulator.empty() ? std::nullopt : std::make_optional(modulator),
          cover.empty() ? std::nullopt : std::make_optional(cover), stats,
          brute_cap);
    if (prep->parsed()) return cmd_preprocess(file);
    if (kern->parsed()) return cmd_kernelize(file, exp, sidecar);
    if (gen->parsed())
      return cmd_generate(kind, cnf_path, clique_path,
                          seed_set ? seed : default_seed(), n, pe, pa, k);
    if (mso->parsed()) return cmd_emit_mso2(file);
    if (cv->parsed())
      return cmd_crossvalidate(seeds, cv_n, cv_pe, cv_pa, cv_k, as_json,
                               brute_cap);
    if (bench->parsed()) return cmd_bench(dir, brute_cap);
  } catch (const RefusalError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
