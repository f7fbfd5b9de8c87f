#include <sstream>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "edgelim/hypergraph.hpp"
#include "edgelim/random.hpp"

using namespace edgelim;

namespace {

using Positions = std::vector<SparsityPattern::Position>;

SparsityPattern symmetric(std::size_t n, const Positions& lower, bool diagonal = true) {
  Positions nz;
  for (const auto& [r, c] : lower) {
    nz.emplace_back(r, c);
    nz.emplace_back(c, r);
  }
  if (diagonal)
    for (std::size_t i = 0; i < n; ++i) nz.emplace_back(i, i);
  return {n, n, nz};
}

// Five vertices, e1={1,2,5}, e2={2,3}, e3={1,3,4,5}, e4={3,4} (1-based).
Hypergraph five_vertex_example() {
  return Hypergraph::from_vertex_sets(5, {{0, 1, 4}, {1, 2}, {0, 2, 3, 4}, {2, 3}});
}

Hypergraph random_hypergraph(Rng& rng, std::size_t n, std::size_t m, std::size_t max_size) {
  std::vector<VertexSet> sets;
  for (std::size_t j = 0; j < m; ++j) {
    const auto size = 1 + rng.below(max_size);
    VertexSet s;
    for (std::size_t k = 0; k < size; ++k) s.push_back(static_cast<VertexId>(rng.below(n)));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    sets.push_back(s);
  }
  return Hypergraph::from_vertex_sets(n, sets);
}

Eigen::MatrixXi dense_incidence(const Hypergraph& g) {
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(g.n_vertices()),
                                            static_cast<Eigen::Index>(g.edge_count()));
  for (std::size_t j = 0; j < g.edge_count(); ++j)
    for (auto v : g.edges()[j].vertices) m(v, static_cast<Eigen::Index>(j)) = 1;
  return m;
}

SparsityPattern pattern_of(const Eigen::MatrixXi& m) {
  Positions nz;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) nz.emplace_back(i, j);
  return {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), nz};
}

std::vector<VertexSet> vertex_sets(const Hypergraph& g) {
  std::vector<VertexSet> out;
  for (const auto& e : g.edges()) out.push_back(e.vertices);
  return out;
}

}  // namespace

TEST(HypergraphConstruction, RejectsEmptyOutOfRangeAndDuplicateIds) {
  EXPECT_THROW(Hypergraph(3, {{0, {}}}), InvalidArgument);
  EXPECT_THROW(Hypergraph(3, {{0, {0, 3}}}), InvalidArgument);
  EXPECT_THROW(Hypergraph(3, {{0, {0, 1}}, {0, {1, 2}}}), InvalidArgument);
}

TEST(HypergraphConstruction, SortsAndDeduplicatesVertices) {
  Hypergraph g(4, {{7, {3, 1, 3}}});
  EXPECT_EQ(g.edge(7).vertices, (VertexSet{1, 3}));
  EXPECT_THROW((void)g.edge(0), InvalidArgument);
}

TEST(FromMatrixPattern, TridiagonalGivesChain) {
  const auto g = hypergraph_from_matrix_pattern(symmetric(5, {{1, 0}, {2, 1}, {3, 2}, {4, 3}}));
  EXPECT_EQ(g.n_vertices(), 5u);
  EXPECT_EQ(vertex_sets(g), (std::vector<VertexSet>{{0, 1}, {1, 2}, {2, 3}, {3, 4}}));
  EXPECT_EQ(g.edge_ids(), (std::vector<EdgeId>{0, 1, 2, 3}));
}

TEST(FromMatrixPattern, DiagonalOnlyHasNoEdges) {
  const auto g = hypergraph_from_matrix_pattern(symmetric(4, {}));
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_EQ(g.n_vertices(), 4u);
}

TEST(FromMatrixPattern, DirectReadout) {
  // (3,1),(1,3),(4,2),(2,4) in 1-based indexing.
  const auto g = hypergraph_from_matrix_pattern(symmetric(4, {{2, 0}, {3, 1}}, false));
  EXPECT_EQ(vertex_sets(g), (std::vector<VertexSet>{{0, 2}, {1, 3}}));
}

TEST(FromMatrixPattern, RejectsAsymmetricAndRectangular) {
  EXPECT_THROW(hypergraph_from_matrix_pattern(SparsityPattern(3, 3, {{1, 0}})), InvalidArgument);
  EXPECT_THROW(hypergraph_from_matrix_pattern(SparsityPattern(3, 4, {})), InvalidArgument);
}

TEST(EliminateEdge, FiveVertexExample) {
  const auto after = eliminate_edge(five_vertex_example(), 0);
  EXPECT_EQ(after.edge_ids(), (std::vector<EdgeId>{1, 2, 3}));
  EXPECT_EQ(vertex_sets(after),
            (std::vector<VertexSet>{{0, 1, 2, 4}, {0, 1, 2, 3, 4}, {2, 3}}));
  EXPECT_EQ(after.n_vertices(), 5u);
}

TEST(EliminateEdge, DisjointEdgeLeavesOthersUntouched) {
  const auto g = Hypergraph::from_vertex_sets(6, {{0, 1}, {2, 3}, {4, 5}, {3, 4}});
  const auto after = eliminate_edge(g, 0);
  EXPECT_EQ(vertex_sets(after), (std::vector<VertexSet>{{2, 3}, {4, 5}, {3, 4}}));
}

TEST(EliminateEdge, ChainMiddleEdge) {
  const auto g = Hypergraph::from_vertex_sets(4, {{0, 1}, {1, 2}, {2, 3}});
  const auto after = eliminate_edge(g, 1);
  EXPECT_EQ(vertex_sets(after), (std::vector<VertexSet>{{0, 1, 2}, {1, 2, 3}}));
  EXPECT_THROW(eliminate_edge(after, 1), InvalidArgument);
}

TEST(EliminateEdge, MonotoneAndPartitionedOnRandomGraphs) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_hypergraph(rng, 2 + rng.below(10), 1 + rng.below(10), 4);
    const auto x = g.edges()[rng.below(g.edge_count())];
    const auto after = eliminate_edge(g, x.id);
    ASSERT_EQ(after.edge_count(), g.edge_count() - 1);
    for (const auto& e : g.edges()) {
      if (e.id == x.id) continue;
      const auto& now = after.edge(e.id).vertices;
      EXPECT_TRUE(sets::is_subset(e.vertices, now));
      if (sets::intersects(e.vertices, x.vertices))
        EXPECT_EQ(now, sets::set_union(e.vertices, x.vertices));
      else
        EXPECT_EQ(now, e.vertices);
    }
  }
}

TEST(IncidenceMatrix, FiveVertexExample) {
  // Rows are vertices 1..5, columns e1..e4.
  const int expected[5][4] = {{1, 0, 1, 0}, {1, 1, 0, 0}, {0, 1, 1, 1}, {0, 0, 1, 1}, {1, 0, 1, 0}};
  const auto p = incidence_matrix(five_vertex_example());
  ASSERT_EQ(p.n_rows(), 5u);
  ASSERT_EQ(p.n_cols(), 4u);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(p.contains(i, j), expected[i][j] == 1);
}

TEST(IncidenceMatrix, EmptyAndChain) {
  const auto empty = incidence_matrix(Hypergraph(3, {}));
  EXPECT_EQ(empty.n_rows(), 3u);
  EXPECT_EQ(empty.n_cols(), 0u);
  EXPECT_EQ(empty.nnz(), 0u);
  const auto chain = incidence_matrix(Hypergraph::from_vertex_sets(3, {{0, 1}, {1, 2}}));
  EXPECT_EQ(chain.nonzeros(), (Positions{{0, 0}, {1, 0}, {1, 1}, {2, 1}}));
}

TEST(AdjacencyMatrices, FiveVertexExampleEdgeAdjacency) {
  const auto a = adjacency_matrices(five_vertex_example());
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const bool zero = (i == 0 && j == 3) || (i == 3 && j == 0);
      EXPECT_EQ(a.edge.contains(i, j), !zero) << i << "," << j;
    }
}

TEST(AdjacencyMatrices, SingleEdgeAndDisjointEdges) {
  const auto one = adjacency_matrices(Hypergraph::from_vertex_sets(2, {{0, 1}}));
  EXPECT_EQ(one.vertex.nnz(), 4u);
  EXPECT_EQ(one.edge.nnz(), 1u);
  const auto two = adjacency_matrices(Hypergraph::from_vertex_sets(4, {{0, 1}, {2, 3}}));
  EXPECT_EQ(two.edge.nonzeros(), (Positions{{0, 0}, {1, 1}}));
}

TEST(AdjacencyMatrices, MatchIncidenceProductsOnRandomGraphs) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_hypergraph(rng, 1 + rng.below(12), rng.below(12), 5);
    const Eigen::MatrixXi inc = dense_incidence(g);
    const auto a = adjacency_matrices(g);
    EXPECT_EQ(a.vertex, pattern_of(inc * inc.transpose()));
    EXPECT_EQ(a.edge, pattern_of(inc.transpose() * inc));
    EXPECT_TRUE(a.vertex.is_symmetric());
    EXPECT_TRUE(a.edge.is_symmetric());
    for (std::size_t i = 0; i < g.edge_count(); ++i)
      for (std::size_t j = 0; j < g.edge_count(); ++j)
        EXPECT_EQ(a.edge.contains(i, j),
                  sets::intersects(g.edges()[i].vertices, g.edges()[j].vertices));
  }
}

TEST(Dual, FiveVertexExampleIsTranspose) {
  const auto g = five_vertex_example();
  const auto d = dual(g);
  EXPECT_EQ(d.graph.n_vertices(), 4u);
  EXPECT_EQ(d.graph.edge_count(), 5u);
  EXPECT_EQ(incidence_matrix(d.graph), incidence_matrix(g).transpose());
}

TEST(Dual, ChainByHand) {
  const auto d = dual(Hypergraph::from_vertex_sets(3, {{0, 1}, {1, 2}}));
  EXPECT_EQ(d.graph.n_vertices(), 2u);
  EXPECT_EQ(vertex_sets(d.graph), (std::vector<VertexSet>{{0}, {0, 1}, {1}}));
  EXPECT_EQ(d.source_vertex, (std::vector<VertexId>{0, 1, 2}));
}

TEST(Dual, DropsIsolatedVerticesAndRecordsMap) {
  const auto d = dual(Hypergraph::from_vertex_sets(5, {{0, 3}, {3, 4}}));
  EXPECT_EQ(d.source_vertex, (std::vector<VertexId>{0, 3, 4}));
  EXPECT_EQ(vertex_sets(d.graph), (std::vector<VertexSet>{{0}, {0, 1}, {1}}));
}

TEST(Dual, InvolutionOnRandomGraphs) {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_hypergraph(rng, 2 + rng.below(8), 1 + rng.below(8), 4);
    const auto d = dual(g);
    const auto dd = dual(d.graph);
    // Drop g's isolated vertices and compare.
    Eigen::MatrixXi full = dense_incidence(g);
    Eigen::MatrixXi kept(static_cast<Eigen::Index>(d.source_vertex.size()), full.cols());
    for (std::size_t r = 0; r < d.source_vertex.size(); ++r)
      kept.row(static_cast<Eigen::Index>(r)) = full.row(d.source_vertex[r]);
    EXPECT_EQ(incidence_matrix(dd.graph), pattern_of(kept));
    if (g.isolated_vertices().empty()) {
      EXPECT_EQ(incidence_matrix(d.graph), incidence_matrix(g).transpose());
    }
  }
}

TEST(Dual, EliminationMergesDualRows) {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_hypergraph(rng, 2 + rng.below(8), 2 + rng.below(7), 4);
    const auto x = g.edges()[rng.below(g.edge_count())].id;
    const auto xpos = *g.position_of(x);
    // Dual incidence has one row per edge: OR row x into every row it shares
    // a column with, then delete row x.
    Eigen::MatrixXi rows = dense_incidence(g).transpose();
    Eigen::MatrixXi merged(rows.rows() - 1, rows.cols());
    Eigen::Index out = 0;
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
      if (r == static_cast<Eigen::Index>(xpos)) continue;
      Eigen::VectorXi row = rows.row(r);
      if ((row.array() * rows.row(static_cast<Eigen::Index>(xpos)).transpose().array()).sum() > 0)
        row = row.cwiseMax(Eigen::VectorXi(rows.row(static_cast<Eigen::Index>(xpos)).transpose()));
      merged.row(out++) = row.transpose();
    }
    EXPECT_EQ(incidence_matrix(eliminate_edge(g, x)).transpose(), pattern_of(merged));
  }
}

TEST(FromSpdPattern, TridiagonalByHand) {
  const auto s = hypergraph_from_spd_pattern(symmetric(3, {{1, 0}, {2, 1}}));
  EXPECT_EQ(s.graph.n_vertices(), 2u);
  EXPECT_EQ(vertex_sets(s.graph), (std::vector<VertexSet>{{0}, {0, 1}, {1}}));
  EXPECT_EQ(s.vertex_position, (Positions{{1, 0}, {2, 1}}));
}

TEST(FromSpdPattern, FiveByFivePatternNeedsSixVertices) {
  const int a[5][5] = {{1, 0, 1, 1, 1}, {0, 1, 1, 1, 1}, {1, 1, 1, 0, 0}, {1, 1, 0, 1, 0}, {1, 1, 0, 0, 1}};
  Positions nz;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      if (a[i][j]) nz.emplace_back(i, j);
  const SparsityPattern p(5, 5, nz);
  const auto s = hypergraph_from_spd_pattern(p);
  EXPECT_EQ(s.graph.n_vertices(), 6u);
  EXPECT_EQ(adjacency_matrices(s.graph).edge, p);
}

TEST(FromSpdPattern, RejectsReducibleAndMalformed) {
  EXPECT_THROW(hypergraph_from_spd_pattern(symmetric(4, {{1, 0}, {3, 2}})), InvalidArgument);
  EXPECT_THROW(hypergraph_from_spd_pattern(SparsityPattern(3, 3, {{1, 0}})), InvalidArgument);
  EXPECT_THROW(hypergraph_from_spd_pattern(SparsityPattern(2, 3, {})), InvalidArgument);
}

TEST(FromSpdPattern, RoundTripOnRandomIrreduciblePatterns) {
  Rng rng(31);
  int tested = 0;
  while (tested < 100) {
    const std::size_t n = 2 + rng.below(11);
    Positions lower;
    const double density = rng.uniform(0.1, 0.8);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (rng.uniform() < density) lower.emplace_back(i, j);
    const auto p = symmetric(n, lower);
    if (!is_connected(p)) continue;
    ++tested;
    EXPECT_EQ(adjacency_matrices(hypergraph_from_spd_pattern(p).graph).edge, p);
  }
}

TEST(MergeIdenticalEdges, KeepsFirstOfEachVertexSet) {
  const auto g = Hypergraph::from_vertex_sets(3, {{0, 1}, {1, 2}, {0, 1}});
  const auto m = merge_identical_edges(g);
  EXPECT_EQ(m.edge_ids(), (std::vector<EdgeId>{0, 1}));
  EXPECT_EQ(g.edge_count(), 3u);
}

TEST(TextFormat, RoundTrip) {
  const auto g = five_vertex_example();
  std::stringstream ss;
  write_hypergraph(ss, g);
  EXPECT_EQ(ss.str(), "5 4\n1 2 5\n2 3\n1 3 4 5\n3 4\n");
  EXPECT_EQ(read_hypergraph(ss), g);
}

TEST(TextFormat, CommentsAndErrorsWithLineNumbers) {
  std::istringstream ok("# header\n3 1\n\n# edge\n1 3\n");
  EXPECT_EQ(vertex_sets(read_hypergraph(ok)), (std::vector<VertexSet>{{0, 2}}));

  std::istringstream bad("3 2\n1 2\n1 4\n");
  try {
    read_hypergraph(bad);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream short_file("3 2\n1 2\n");
  EXPECT_THROW(read_hypergraph(short_file), ParseError);
}
