#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace steiner {

using VertexId = int;

// Undirected edge, stored normalized with first < second.
using Edge = std::pair<VertexId, VertexId>;
// Directed arc first -> second.
using Arc = std::pair<VertexId, VertexId>;

inline Edge make_edge(VertexId u, VertexId v) {
  return u < v ? Edge{u, v} : Edge{v, u};
}

struct TerminalPair {
  VertexId s = 0;
  VertexId t = 0;
  auto operator<=>(const TerminalPair&) const = default;
};

// Mixed graph on vertices {0, ..., n-1}. Edge and arc lists are kept sorted
// and duplicate-free. Anti-parallel arc pairs may occur transiently (they are
// mixed 2-cycles and preprocessing contracts them); an edge parallel to an
// arc is never allowed.
struct MixedGraph {
  int n = 0;
  std::vector<Edge> edges;
  std::vector<Arc> arcs;

  bool operator==(const MixedGraph&) const = default;

  bool has_edge(VertexId u, VertexId v) const {
    return std::binary_search(edges.begin(), edges.end(), make_edge(u, v));
  }
  bool has_arc(VertexId u, VertexId v) const {
    return std::binary_search(arcs.begin(), arcs.end(), Arc{u, v});
  }
};

struct Instance {
  MixedGraph graph;
  std::vector<TerminalPair> terminals;  // canonical: sorted, deduplicated

  bool operator==(const Instance&) const = default;
};

// Orientation of an instance's edge set. dir.at(e) == true means e is
// directed first -> second (low id to high id).
struct Orientation {
  std::map<Edge, bool> dir;

  Arc arc_of(const Edge& e) const {
    return dir.at(e) ? Arc{e.first, e.second} : Arc{e.second, e.first};
  }
  bool operator==(const Orientation&) const = default;
};

struct Verdict {
  bool yes = false;
  std::optional<Orientation> witness;  // present iff yes
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line)
      : std::runtime_error(msg + " at line " + std::to_string(line)),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A documented cap or precondition turned the request down.
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void sort_unique_edges(std::vector<Edge>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace detail

// Canonicalize in place: sort edge/arc/terminal lists, deduplicate terminal
// pairs, and validate the MixedGraph invariants. Throws std::logic_error on
// violation (construction-time contract, not user input).
inline void normalize(Instance& inst) {
  auto& g = inst.graph;
  for (auto& e : g.edges) e = make_edge(e.first, e.second);
  detail::sort_unique_edges(g.edges);
  std::sort(g.arcs.begin(), g.arcs.end());
  g.arcs.erase(std::unique(g.arcs.begin(), g.arcs.end()), g.arcs.end());
  for (const auto& e : g.edges) {
    if (e.first == e.second) throw std::logic_error("self-loop edge");
    if (e.first < 0 || e.second >= g.n) throw std::logic_error("edge out of range");
    if (g.has_arc(e.first, e.second) || g.has_arc(e.second, e.first))
      throw std::logic_error("edge parallel to arc");
  }
  for (const auto& a : g.arcs) {
    if (a.first == a.second) throw std::logic_error("self-loop arc");
    if (a.first < 0 || a.first >= g.n || a.second < 0 || a.second >= g.n)
      throw std::logic_error("arc out of range");
  }
  std::sort(inst.terminals.begin(), inst.terminals.end());
  inst.terminals.erase(
      std::unique(inst.terminals.begin(), inst.terminals.end()),
      inst.terminals.end());
  for (const auto& tp : inst.terminals)
    if (tp.s < 0 || tp.s >= g.n || tp.t < 0 || tp.t >= g.n)
      throw std::logic_error("terminal out of range");
}

inline Instance make_instance(int n, std::vector<Edge> edges,
                              std::vector<Arc> arcs,
                              std::vector<TerminalPair> terminals) {
  Instance inst{MixedGraph{n, std::move(edges), std::move(arcs)},
                std::move(terminals)};
  normalize(inst);
  return inst;
}

// Parse the instance file format:
//   c <comment>
//   p so <n> <|E|> <|A|> <k>
//   e <u> <v>        undirected edge, 1-based
//   a <u> <v>        arc u -> v
//   t <s> <t>        terminal pair
// Duplicate terminal pairs are deduplicated after the declared counts are
// checked; duplicate edges or arcs are errors.
inline Instance parse_instance(std::istream& in) {
  std::string line;
  int lineno = 0;
  bool have_header = false;
  long long n = 0, ne = 0, na = 0, nk = 0;
  std::vector<Edge> edges;
  std::vector<Arc> arcs;
  std::vector<TerminalPair> terminals;
  std::set<Edge> edge_seen;
  std::set<Arc> arc_seen;

  auto read_pair = [&](std::istringstream& ss, long long& u, long long& v) {
    if (!(ss >> u >> v)) throw ParseError("expected two vertex ids", lineno);
    std::string rest;
    if (ss >> rest) throw ParseError("trailing tokens", lineno);
    if (u < 1 || u > n || v < 1 || v > n)
      throw ParseError("vertex id out of range", lineno);
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;  // blank line
    if (tag == "c") continue;
    if (tag == "p") {
      if (have_header) throw ParseError("duplicate header", lineno);
      std::string kind;
      if (!(ss >> kind) || kind != "so")
        throw ParseError("malformed header, expected 'p so'", lineno);
      if (!(ss >> n >> ne >> na >> nk) || n < 0 || ne < 0 || na < 0 || nk < 0)
        throw ParseError("malformed header counts", lineno);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("data line before header", lineno);
    long long u, v;
    if (tag == "e") {
      read_pair(ss, u, v);
      if (u == v) throw ParseError("self-loop", lineno);
      Edge e = make_edge(int(u - 1), int(v - 1));
      if (!edge_seen.insert(e).second) throw ParseError("duplicate edge", lineno);
      if (arc_seen.count({e.first, e.second}) || arc_seen.count({e.second, e.first}))
        throw ParseError("edge parallel to arc", lineno);
      edges.push_back(e);
    } else if (tag == "a") {
      read_pair(ss, u, v);
      if (u == v) throw ParseError("self-loop", lineno);
      Arc a{int(u - 1), int(v - 1)};
      if (!arc_seen.insert(a).second) throw ParseError("duplicate arc", lineno);
      if (edge_seen.count(make_edge(a.first, a.second)))
        throw ParseError("edge parallel to arc", lineno);
      arcs.push_back(a);
    } else if (tag == "t") {
      read_pair(ss, u, v);
      terminals.push_back({int(u - 1), int(v - 1)});
    } else {
      throw ParseError("unknown line type '" + tag + "'", lineno);
    }
  }
  if (!have_header) throw ParseError("missing header", lineno == 0 ? 1 : lineno);
  if ((long long)edges.size() != ne)
    throw ParseError("edge count mismatch with header", lineno);
  if ((long long)arcs.size() != na)
    throw ParseError("arc count mismatch with header", lineno);
  if ((long long)terminals.size() != nk)
    throw ParseError("terminal count mismatch with header", lineno);

  Instance inst{MixedGraph{int(n), std::move(edges), std::move(arcs)},
                std::move(terminals)};
  normalize(inst);
  return inst;
}

inline Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

// Canonical text form; parse_instance(serialize_instance(i)) == i.
inline std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "p so " << inst.graph.n << ' ' << inst.graph.edges.size() << ' '
      << inst.graph.arcs.size() << ' ' << inst.terminals.size() << '\n';
  for (const auto& e : inst.graph.edges)
    out << "e " << e.first + 1 << ' ' << e.second + 1 << '\n';
  for (const auto& a : inst.graph.arcs)
    out << "a " << a.first + 1 << ' ' << a.second + 1 << '\n';
  for (const auto& tp : inst.terminals)
    out << "t " << tp.s + 1 << ' ' << tp.t + 1 << '\n';
  return out.str();
}

// Witness lines: `o <u> <v>` meaning u -> v, one per edge.
inline std::string serialize_orientation(const Orientation& o) {
  std::ostringstream out;
  for (const auto& [e, d] : o.dir) {
    Arc a = d ? Arc{e.first, e.second} : Arc{e.second, e.first};
    out << "o " << a.first + 1 << ' ' << a.second + 1 << '\n';
  }
  return out.str();
}

inline Orientation parse_orientation(std::istream& in) {
  Orientation o;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "c") continue;
    if (tag != "o") throw ParseError("expected 'o' line", lineno);
    long long u, v;
    if (!(ss >> u >> v)) throw ParseError("expected two vertex ids", lineno);
    Edge e = make_edge(int(u - 1), int(v - 1));
    o.dir[e] = (u < v);
  }
  return o;
}

// True iff every terminal pair (s, t) has a directed s -> t path in the
// digraph formed by the arcs plus the oriented edges. Throws on a domain
// mismatch between the orientation and the instance's edge set.
inline bool check_orientation(const Instance& inst, const Orientation& o) {
  if (o.dir.size() != inst.graph.edges.size())
    throw std::logic_error("orientation domain mismatch");
  for (const auto& e : inst.graph.edges)
    if (!o.dir.count(e)) throw std::logic_error("orientation domain mismatch");

  std::vector<std::vector<int>> adj(inst.graph.n);
  for (const auto& a : inst.graph.arcs) adj[a.first].push_back(a.second);
  for (const auto& [e, d] : o.dir) {
    Arc a = d ? Arc{e.first, e.second} : Arc{e.second, e.first};
    adj[a.first].push_back(a.second);
  }
  std::vector<char> seen(inst.graph.n);
  std::vector<int> stack;
  for (const auto& tp : inst.terminals) {
    if (tp.s == tp.t) continue;
    std::fill(seen.begin(), seen.end(), 0);
    stack.assign(1, tp.s);
    seen[tp.s] = 1;
    bool found = false;
    while (!stack.empty() && !found) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v]) {
        if (w == tp.t) { found = true; break; }
        if (!seen[w]) { seen[w] = 1; stack.push_back(w); }
      }
    }
    if (!found) return false;
  }
  return true;
}

// Underlying undirected graph: arcs replaced by edges, deduplicated.
inline MixedGraph underlying_graph(const MixedGraph& g) {
  MixedGraph u;
  u.n = g.n;
  u.edges = g.edges;
  for (const auto& a : g.arcs) u.edges.push_back(make_edge(a.first, a.second));
  detail::sort_unique_edges(u.edges);
  return u;
}

}  // namespace steiner
