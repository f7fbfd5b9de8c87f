#pragma once

// Hypergraph value type and the structural operations on it: edge
// elimination, incidence/adjacency patterns, the dual hypergraph, and the
// two constructors from matrix patterns.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "edgelim/error.hpp"
#include "edgelim/sparsity_pattern.hpp"

namespace edgelim {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using VertexSet = std::vector<VertexId>;  // sorted, duplicate-free

namespace sets {

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool intersects(const VertexSet& a, const VertexSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

inline std::size_t union_size(const VertexSet& a, const VertexSet& b) {
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return a.size() + b.size() - common;
}

inline bool is_subset(const VertexSet& sub, const VertexSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

}  // namespace sets

struct HyperEdge {
  EdgeId id = 0;
  VertexSet vertices;

  bool operator==(const HyperEdge&) const = default;
};

/// Undirected hypergraph with stable edge ids. Vertices are 0..n_vertices-1
/// and are never removed; duplicate vertex sets are kept as distinct edges.
class Hypergraph {
 public:
  Hypergraph() = default;

  Hypergraph(std::size_t n_vertices, std::vector<HyperEdge> edges)
      : n_vertices_(n_vertices), edges_(std::move(edges)) {
    std::vector<EdgeId> ids;
    ids.reserve(edges_.size());
    for (auto& e : edges_) {
      std::sort(e.vertices.begin(), e.vertices.end());
      e.vertices.erase(std::unique(e.vertices.begin(), e.vertices.end()), e.vertices.end());
      if (e.vertices.empty())
        throw InvalidArgument("hyperedge " + std::to_string(e.id) + " has no vertices");
      if (e.vertices.back() >= n_vertices_)
        throw InvalidArgument("hyperedge " + std::to_string(e.id) + " references vertex " +
                              std::to_string(e.vertices.back()) + " >= " +
                              std::to_string(n_vertices_));
      ids.push_back(e.id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      throw InvalidArgument("duplicate hyperedge id");
  }

  /// Edges get ids 0..m-1 in the given order.
  static Hypergraph from_vertex_sets(std::size_t n_vertices,
                                     const std::vector<VertexSet>& sets) {
    std::vector<HyperEdge> edges;
    edges.reserve(sets.size());
    for (std::size_t j = 0; j < sets.size(); ++j)
      edges.push_back({static_cast<EdgeId>(j), sets[j]});
    return {n_vertices, std::move(edges)};
  }

  [[nodiscard]] std::size_t n_vertices() const noexcept { return n_vertices_; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
  [[nodiscard]] const std::vector<HyperEdge>& edges() const noexcept { return edges_; }

  [[nodiscard]] std::optional<std::size_t> position_of(EdgeId id) const {
    for (std::size_t j = 0; j < edges_.size(); ++j)
      if (edges_[j].id == id) return j;
    return std::nullopt;
  }

  [[nodiscard]] const HyperEdge& edge(EdgeId id) const {
    const auto pos = position_of(id);
    if (!pos) throw InvalidArgument("unknown hyperedge id " + std::to_string(id));
    return edges_[*pos];
  }

  [[nodiscard]] std::vector<EdgeId> edge_ids() const {
    std::vector<EdgeId> ids;
    ids.reserve(edges_.size());
    for (const auto& e : edges_) ids.push_back(e.id);
    return ids;
  }

  /// Vertices contained in no edge.
  [[nodiscard]] std::vector<VertexId> isolated_vertices() const {
    std::vector<char> used(n_vertices_, 0);
    for (const auto& e : edges_)
      for (auto v : e.vertices) used[v] = 1;
    std::vector<VertexId> out;
    for (std::size_t v = 0; v < n_vertices_; ++v)
      if (!used[v]) out.push_back(static_cast<VertexId>(v));
    return out;
  }

  bool operator==(const Hypergraph&) const = default;

 private:
  std::size_t n_vertices_ = 0;
  std::vector<HyperEdge> edges_;
};

/// Removes x and replaces every edge meeting x by its union with x. Edges
/// disjoint from x are copied unchanged; relative edge order is kept.
inline Hypergraph eliminate_edge(const Hypergraph& g, EdgeId x) {
  const auto& xv = g.edge(x).vertices;
  std::vector<HyperEdge> out;
  out.reserve(g.edge_count() - 1);
  for (const auto& e : g.edges()) {
    if (e.id == x) continue;
    if (sets::intersects(e.vertices, xv)) {
      out.push_back({e.id, sets::set_union(e.vertices, xv)});
    } else {
      out.push_back(e);
    }
  }
  return {g.n_vertices(), std::move(out)};
}

/// |V| x |E| node-edge incidence pattern; column j is the j-th stored edge.
inline SparsityPattern incidence_matrix(const Hypergraph& g) {
  std::vector<SparsityPattern::Position> nz;
  for (std::size_t j = 0; j < g.edge_count(); ++j)
    for (auto v : g.edges()[j].vertices) nz.emplace_back(v, j);
  return {g.n_vertices(), g.edge_count(), std::move(nz)};
}

struct AdjacencyPatterns {
  SparsityPattern vertex;  // A_V = I I^T
  SparsityPattern edge;    // A_E = I^T I
};

inline AdjacencyPatterns adjacency_matrices(const Hypergraph& g) {
  std::vector<SparsityPattern::Position> av;
  for (const auto& e : g.edges())
    for (auto a : e.vertices)
      for (auto b : e.vertices) av.emplace_back(a, b);

  std::vector<SparsityPattern::Position> ae;
  const auto& es = g.edges();
  for (std::size_t i = 0; i < es.size(); ++i) {
    ae.emplace_back(i, i);
    for (std::size_t j = i + 1; j < es.size(); ++j) {
      if (sets::intersects(es[i].vertices, es[j].vertices)) {
        ae.emplace_back(i, j);
        ae.emplace_back(j, i);
      }
    }
  }
  return {SparsityPattern(g.n_vertices(), g.n_vertices(), std::move(av)),
          SparsityPattern(g.edge_count(), g.edge_count(), std::move(ae))};
}

struct DualHypergraph {
  /// Vertex j of the dual stands for the j-th edge of the original; dual edge
  /// ids are 0..k-1 in increasing original-vertex order.
  Hypergraph graph;
  /// dual edge id -> original vertex it came from (isolated vertices dropped).
  std::vector<VertexId> source_vertex;
};

inline DualHypergraph dual(const Hypergraph& g) {
  std::vector<VertexSet> star(g.n_vertices());
  for (std::size_t j = 0; j < g.edge_count(); ++j)
    for (auto v : g.edges()[j].vertices) star[v].push_back(static_cast<VertexId>(j));

  DualHypergraph d;
  std::vector<HyperEdge> edges;
  for (std::size_t v = 0; v < star.size(); ++v) {
    if (star[v].empty()) continue;
    edges.push_back({static_cast<EdgeId>(edges.size()), std::move(star[v])});
    d.source_vertex.push_back(static_cast<VertexId>(v));
  }
  d.graph = Hypergraph(g.edge_count(), std::move(edges));
  return d;
}

/// One 2-vertex edge {l, k} per strictly-lower nonzero (k > l) of a
/// symmetric pattern; edges are ordered by (l, k) and numbered from 0.
inline Hypergraph hypergraph_from_matrix_pattern(const SparsityPattern& p) {
  if (!p.is_square())
    throw InvalidArgument("matrix pattern must be square, got " + std::to_string(p.n_rows()) +
                          "x" + std::to_string(p.n_cols()));
  if (!p.is_symmetric()) throw InvalidArgument("matrix pattern is not symmetric");
  std::vector<std::pair<VertexId, VertexId>> lower;  // (col l, row k)
  for (const auto& [r, c] : p.nonzeros())
    if (r > c) lower.emplace_back(static_cast<VertexId>(c), static_cast<VertexId>(r));
  std::sort(lower.begin(), lower.end());
  std::vector<VertexSet> sets;
  sets.reserve(lower.size());
  for (const auto& [l, k] : lower) sets.push_back({l, k});
  return Hypergraph::from_vertex_sets(p.n_rows(), sets);
}

struct SpdHypergraph {
  Hypergraph graph;
  /// vertex id -> (row i, col j) of the strict-lower nonzero it represents.
  std::vector<std::pair<std::size_t, std::size_t>> vertex_position;
};

/// Hypergraph whose edge-edge adjacency pattern equals the given symmetric
/// pattern: one vertex per strictly-lower nonzero (i, j), and edge j holds
/// the nonzeros of column j and row j of the strict lower triangle.
inline SpdHypergraph hypergraph_from_spd_pattern(const SparsityPattern& p) {
  if (!p.is_square()) throw InvalidArgument("pattern must be square");
  if (!p.is_symmetric()) throw InvalidArgument("pattern is not symmetric");
  const std::size_t n = p.n_rows();
  for (std::size_t i = 0; i < n; ++i)
    if (!p.contains(i, i))
      throw InvalidArgument("diagonal entry " + std::to_string(i) +
                            " missing; not a positive definite pattern");
  if (!is_connected(p) || n < 2)
    throw InvalidArgument("pattern is reducible; every edge needs an off-diagonal nonzero");

  SpdHypergraph out;
  std::vector<std::pair<std::size_t, std::size_t>> lower;  // (col j, row i), i > j
  for (const auto& [r, c] : p.nonzeros())
    if (r > c) lower.emplace_back(c, r);
  std::sort(lower.begin(), lower.end());

  std::vector<VertexSet> sets(n);
  for (std::size_t v = 0; v < lower.size(); ++v) {
    const auto [j, i] = lower[v];
    out.vertex_position.emplace_back(i, j);
    sets[j].push_back(static_cast<VertexId>(v));  // column j
    sets[i].push_back(static_cast<VertexId>(v));  // row i
  }
  out.graph = Hypergraph::from_vertex_sets(lower.size(), sets);
  return out;
}

/// Drops edges whose vertex set repeats an earlier edge's (keeps the lowest
/// position). Only meaningful for symbolic studies; off unless called.
inline Hypergraph merge_identical_edges(const Hypergraph& g) {
  std::set<VertexSet> seen;
  std::vector<HyperEdge> out;
  for (const auto& e : g.edges())
    if (seen.insert(e.vertices).second) out.push_back(e);
  return {g.n_vertices(), std::move(out)};
}

// Text format: "n_vertices n_edges" header, then one line per edge with its
// 1-based vertex indices. Lines starting with '#' are comments. Edge ids are
// assigned 0..m-1 in file order.

inline void write_hypergraph(std::ostream& os, const Hypergraph& g) {
  os << g.n_vertices() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges()) {
    for (std::size_t k = 0; k < e.vertices.size(); ++k)
      os << (k ? " " : "") << e.vertices[k] + 1;
    os << '\n';
  }
}

inline Hypergraph read_hypergraph(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(line_no, "missing 'n_vertices n_edges' header");
  std::size_t n = 0;
  std::size_t m = 0;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> n >> m) || (hs >> extra))
      throw ParseError(line_no, "expected 'n_vertices n_edges'");
  }
  std::vector<VertexSet> sets;
  sets.reserve(m);
  while (sets.size() < m) {
    if (!next_line())
      throw ParseError(line_no, "expected " + std::to_string(m) + " edges, found " +
                                    std::to_string(sets.size()));
    std::istringstream ls(line);
    VertexSet vs;
    long long v = 0;
    while (ls >> v) {
      if (v < 1 || static_cast<std::size_t>(v) > n)
        throw ParseError(line_no, "vertex index " + std::to_string(v) + " out of range 1.." +
                                      std::to_string(n));
      vs.push_back(static_cast<VertexId>(v - 1));
    }
    if (!ls.eof()) throw ParseError(line_no, "non-integer token in edge list");
    if (vs.empty()) throw ParseError(line_no, "empty hyperedge");
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    sets.push_back(std::move(vs));
  }
  if (next_line()) throw ParseError(line_no, "trailing content after last edge");
  return Hypergraph::from_vertex_sets(n, sets);
}

}  // namespace edgelim
