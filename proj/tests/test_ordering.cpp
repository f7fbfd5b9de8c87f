#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "edgelim/ordering.hpp"
#include "edgelim/random.hpp"

using namespace edgelim;

namespace {

Hypergraph chain(std::size_t n) {
  std::vector<VertexSet> sets;
  for (std::size_t i = 0; i + 1 < n; ++i)
    sets.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1)});
  return Hypergraph::from_vertex_sets(n, sets);
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

// Plain replay with vector sets, independent of the engine.
std::vector<std::int64_t> replay_sizes(std::vector<VertexSet> sets, const std::vector<std::size_t>& order) {
  std::vector<char> live(sets.size(), 1);
  std::vector<std::int64_t> sizes;
  for (auto x : order) {
    sizes.push_back(static_cast<std::int64_t>(sets[x].size()));
    live[x] = 0;
    for (std::size_t e = 0; e < sets.size(); ++e) {
      if (!live[e]) continue;
      VertexSet common;
      std::set_intersection(sets[e].begin(), sets[e].end(), sets[x].begin(), sets[x].end(),
                            std::back_inserter(common));
      if (common.empty()) continue;
      VertexSet u;
      std::set_union(sets[e].begin(), sets[e].end(), sets[x].begin(), sets[x].end(),
                     std::back_inserter(u));
      sets[e] = u;
    }
  }
  return sizes;
}

std::int64_t exhaustive_best(const Hypergraph& g, CostMeasure measure) {
  std::vector<VertexSet> sets;
  for (const auto& e : g.edges()) sets.push_back(e.vertices);
  std::vector<std::size_t> perm(sets.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  do {
    std::int64_t total = 0;
    for (auto s : replay_sizes(sets, perm)) total += measure == CostMeasure::Roots ? s : s * s;
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::int64_t score_by_definition(const std::vector<VertexSet>& live, std::size_t x, int kind, int k) {
  auto pw = [&](std::size_t v) { return static_cast<std::int64_t>(k == 1 ? v : v * v); };
  std::int64_t incident = 0;
  std::int64_t look = pw(live[x].size());
  for (std::size_t e = 0; e < live.size(); ++e) {
    if (e == x || !sets::intersects(live[e], live[x])) continue;
    ++incident;
    look += pw(sets::union_size(live[e], live[x])) - pw(live[e].size());
  }
  if (kind == 0) return incident;
  if (kind == 1) return static_cast<std::int64_t>(live[x].size());
  return look;
}

}  // namespace

TEST(Scores, ChainIncidence) {
  const auto g = chain(4);
  EXPECT_EQ(mu_i(g, 0), 1);
  EXPECT_EQ(mu_i(g, 1), 2);
  EXPECT_EQ(mu_i(Hypergraph::from_vertex_sets(4, {{0, 1}, {2, 3}}), 0), 0);
  EXPECT_EQ(mu_i(eliminate_edge(g, 0), 1), 1);
}

TEST(Scores, RootCounts) {
  EXPECT_EQ(mu_r(chain(4), 2), 2);
  EXPECT_EQ(mu_r(eliminate_edge(chain(4), 1), 0), 3);
  const auto g = Hypergraph::from_vertex_sets(5, {{0, 1, 4}, {1, 2}, {0, 2, 3, 4}, {2, 3}});
  EXPECT_EQ(mu_r(eliminate_edge(g, 0), 1), 4);
}

TEST(Scores, LookAheadCost) {
  const auto g = chain(4);
  EXPECT_EQ(mu_c(g, 0, 1), 3);
  EXPECT_EQ(mu_c(g, 1, 1), 4);
  EXPECT_EQ(mu_c(Hypergraph::from_vertex_sets(2, {{0, 1}}), 0, 2), 4);
  EXPECT_THROW((void)mu_c(g, 0, 3), InvalidArgument);
}

TEST(Scores, DeadEdgeRejected) {
  SymbolicEngine engine(chain(4));
  engine.eliminate(1);
  EXPECT_THROW((void)engine.mu_r(1), InvalidArgument);
  EXPECT_THROW((void)mu_i(chain(4), 9), InvalidArgument);
}

TEST(Scores, MatchDefinitionAlongRandomEliminations) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = random_hypergraph(rng, 3 + rng.below(10), 2 + rng.below(10), 4);
    SymbolicEngine engine(g);
    while (g.edge_count() > 0) {
      std::vector<VertexSet> live;
      for (const auto& e : g.edges()) live.push_back(e.vertices);
      for (std::size_t x = 0; x < live.size(); ++x) {
        const auto id = g.edges()[x].id;
        EXPECT_EQ(engine.mu_i(id), score_by_definition(live, x, 0, 1));
        EXPECT_EQ(engine.mu_r(id), score_by_definition(live, x, 1, 1));
        EXPECT_EQ(engine.mu_c(id, 1), score_by_definition(live, x, 2, 1));
        EXPECT_EQ(engine.mu_c(id, 2), score_by_definition(live, x, 2, 2));
      }
      const auto x = g.edges()[rng.below(g.edge_count())].id;
      engine.eliminate(x);
      g = eliminate_edge(g, x);
    }
  }
}

TEST(RunElimination, ChainEightTotals) {
  const auto g = chain(8);
  EXPECT_EQ(run_elimination(g, Heuristic::mr()).cost.total_roots, 24);
  EXPECT_EQ(run_elimination(g, Heuristic::mc(1)).cost.total_roots, 24);
  EXPECT_EQ(run_elimination(g, Heuristic::mc(2)).cost.total_roots, 25);
  const auto mi = run_elimination(g, Heuristic::mi());
  EXPECT_EQ(mi.cost.total_roots, 35);
  EXPECT_EQ(mi.ordering, (Ordering{0, 1, 2, 3, 4, 5, 6}));
}

TEST(RunElimination, PowerOfTwoChains) {
  for (std::size_t n = 8; n <= 256; n *= 2) {
    const auto expected = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(std::log2(n));
    EXPECT_EQ(run_elimination(chain(n), Heuristic::mr()).cost.total_roots, expected) << n;
    EXPECT_EQ(run_elimination(chain(n), Heuristic::mc(1)).cost.total_roots, expected) << n;
  }
}

TEST(RunElimination, ReplayAndLowerBound) {
  Rng rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = random_hypergraph(rng, 4 + rng.below(20), 1 + rng.below(25), 3);
    for (const auto& h : greedy_heuristics()) {
      const auto run = run_elimination(g, h, {.full_recompute = true});
      EXPECT_EQ(simulate_ordering(g, run.ordering), run.cost);
      std::int64_t sum = 0;
      for (const auto& e : g.edges()) sum += static_cast<std::int64_t>(e.vertices.size());
      EXPECT_GE(run.cost.total_roots, sum);
      EXPECT_EQ(run.cost.total_roots,
                std::accumulate(run.cost.per_step_sizes.begin(), run.cost.per_step_sizes.end(),
                                std::int64_t{0}));
    }
  }
}

TEST(RunElimination, MatrixGraphsRootsAtLeastTwicePerEdge) {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4 + rng.below(20);
    std::vector<VertexSet> sets;
    for (VertexId i = 1; i < n; ++i)
      for (VertexId j = 0; j < i; ++j)
        if (rng.uniform() < 0.3) sets.push_back({j, i});
    const auto g = Hypergraph::from_vertex_sets(n, sets);
    for (const auto& h : greedy_heuristics()) {
      const auto c = run_elimination(g, h).cost;
      EXPECT_GE(c.total_roots, 2 * static_cast<std::int64_t>(g.edge_count()));
      for (auto s : c.per_step_sizes) EXPECT_GE(s, 2);
    }
  }
}

TEST(RunElimination, SizesNeverShrinkAlongAnEdgeLifetime) {
  Rng rng(2);
  const auto g = random_hypergraph(rng, 15, 20, 3);
  SymbolicEngine engine(g);
  std::vector<std::int64_t> last(g.edge_count(), 0);
  for (auto x : run_elimination(g, Heuristic::mc(2)).ordering) {
    engine.live_slots().for_each([&](std::size_t s) {
      EXPECT_GE(engine.size_at(s), last[s]);
      last[s] = engine.size_at(s);
    });
    engine.eliminate(x);
  }
}

TEST(RunElimination, SelfInclusiveIncidenceGivesSameOrder) {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_hypergraph(rng, 4 + rng.below(15), 1 + rng.below(20), 3);
    EXPECT_EQ(run_elimination(g, Heuristic::mi()).ordering,
              run_elimination(g, Heuristic::mi(), {.mi_count_self = true}).ordering);
  }
}

TEST(RunElimination, ObserverSeesChosenEdgeWithMinimalScore) {
  std::size_t steps = 0;
  run_elimination(chain(8), Heuristic::mc(1), {}, [&](const StepSnapshot& s) {
    ++steps;
    const auto chosen = std::find_if(s.live.begin(), s.live.end(),
                                     [&](const auto& e) { return e.id == s.chosen; });
    ASSERT_NE(chosen, s.live.end());
    for (const auto& e : s.live) {
      EXPECT_GE(e.score, chosen->score);
      if (e.score == chosen->score) {
        EXPECT_GE(e.id, chosen->id);
      }
    }
  });
  EXPECT_EQ(steps, 7u);
}

TEST(SimulateOrdering, ChainFourByHand) {
  const auto g = chain(4);
  EXPECT_EQ(simulate_ordering(g, {1, 0, 2}).per_step_sizes, (std::vector<std::int64_t>{2, 3, 4}));
  EXPECT_EQ(simulate_ordering(g, {0, 2, 1}).per_step_sizes, (std::vector<std::int64_t>{2, 2, 4}));
  EXPECT_EQ(simulate_ordering(g, {0, 2, 1}).total_roots, 8);
  const auto lex = simulate_ordering(g, {0, 1, 2});
  EXPECT_EQ(lex.per_step_sizes, (std::vector<std::int64_t>{2, 3, 4}));
  EXPECT_EQ(lex.total_roots, 9);
  EXPECT_EQ(lex.total_root_cost, 4 + 9 + 16);
  EXPECT_EQ(simulate_ordering(chain(2), {0}).total_roots, 2);
}

TEST(SimulateOrdering, RejectsNonPermutations) {
  EXPECT_THROW(simulate_ordering(chain(4), {0, 1}), InvalidArgument);
  EXPECT_THROW(simulate_ordering(chain(4), {0, 1, 1}), InvalidArgument);
  EXPECT_THROW(simulate_ordering(chain(4), {0, 1, 7}), InvalidArgument);
}

TEST(SimulateOrdering, MatchesIndependentReplay) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_hypergraph(rng, 3 + rng.below(10), 1 + rng.below(10), 4);
    std::vector<std::size_t> perm(g.edge_count());
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span(perm));
    Ordering order;
    for (auto p : perm) order.push_back(g.edges()[p].id);
    std::vector<VertexSet> sets;
    for (const auto& e : g.edges()) sets.push_back(e.vertices);
    EXPECT_EQ(simulate_ordering(g, order).per_step_sizes, replay_sizes(sets, perm));
  }
}

TEST(Baseline, SingleEdgeAndDeterminism) {
  const auto one = random_baseline(chain(2), 1, 5);
  EXPECT_EQ(one.roots.min, 2);
  EXPECT_EQ(one.roots.max, 2);
  const auto g = chain(64);
  const auto a = random_baseline(g, 20, 77, 1);
  EXPECT_EQ(a, random_baseline(g, 20, 77, 1));
  EXPECT_EQ(a, random_baseline(g, 20, 77, 4));
  EXPECT_EQ(a.trials, 20u);
  EXPECT_EQ(a.rng, std::string(Rng::algorithm));
  EXPECT_NE(a, random_baseline(g, 20, 78, 1));
}

TEST(Baseline, OrderStatisticsConsistentWithRawValues) {
  const auto b = random_baseline(chain(32), 9, 1);
  std::vector<std::int64_t> raw = b.raw_roots;
  std::sort(raw.begin(), raw.end());
  EXPECT_EQ(b.roots.min, raw.front());
  EXPECT_EQ(b.roots.max, raw.back());
  EXPECT_EQ(b.roots.median, raw[4]);
  EXPECT_EQ(b.roots.q1, raw[2]);
  EXPECT_EQ(b.roots.q3, raw[6]);
  EXPECT_THROW(random_baseline(chain(4), 0, 1), InvalidArgument);
}

TEST(Baseline, ChainRandomOrdersAreWorseThanMinRoots) {
  EXPECT_GT(random_baseline(chain(256), 20, 1).roots.min, 2048);
}

TEST(OrderStatistics, LinearInterpolation) {
  const auto s = order_statistics({4, 1, 3, 2});
  EXPECT_DOUBLE_EQ(s.min, 1);
  EXPECT_DOUBLE_EQ(s.q1, 1.75);
  EXPECT_DOUBLE_EQ(s.median, 2.5);
  EXPECT_DOUBLE_EQ(s.q3, 3.25);
  EXPECT_DOUBLE_EQ(s.max, 4);
}

TEST(BruteForce, SmallCases) {
  EXPECT_EQ(brute_force_optimal(chain(4), CostMeasure::Roots).value, 8);
  EXPECT_EQ(brute_force_optimal(chain(2), CostMeasure::Roots).value, 2);
  const auto best = brute_force_optimal(chain(8), CostMeasure::Roots);
  EXPECT_EQ(best.value, 24);
  EXPECT_EQ(simulate_ordering(chain(8), best.ordering).total_roots, 24);
  EXPECT_THROW(brute_force_optimal(chain(12), CostMeasure::Roots), InvalidArgument);
}

TEST(BruteForce, MatchesExhaustiveEnumerationAndBoundsHeuristics) {
  Rng rng(6);
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = random_hypergraph(rng, 3 + rng.below(8), 1 + rng.below(7), 4);
    for (auto measure : {CostMeasure::Roots, CostMeasure::Cost}) {
      const auto best = brute_force_optimal(g, measure);
      EXPECT_EQ(best.value, exhaustive_best(g, measure));
      const auto replay = simulate_ordering(g, best.ordering);
      EXPECT_EQ(measure == CostMeasure::Roots ? replay.total_roots : replay.total_root_cost,
                best.value);
      for (const auto& h : greedy_heuristics()) {
        const auto c = run_elimination(g, h).cost;
        EXPECT_GE(measure == CostMeasure::Roots ? c.total_roots : c.total_root_cost, best.value);
      }
    }
  }
}

TEST(FillEquivalence, DisjointEdgesHaveNoEvents) {
  const auto f = symbolic_ge_fill_equivalence(Hypergraph::from_vertex_sets(4, {{0, 1}, {2, 3}}), {1, 0});
  EXPECT_TRUE(f.equivalent());
  for (const auto& s : f.fill_events) EXPECT_TRUE(s.empty());
  for (const auto& s : f.growth_events) EXPECT_TRUE(s.empty());
}

TEST(FillEquivalence, ChainAndFiveVertexExample) {
  const auto c = symbolic_ge_fill_equivalence(chain(4), {0, 1, 2});
  EXPECT_TRUE(c.equivalent());
  ASSERT_EQ(c.fill_events.size(), 3u);
  EXPECT_TRUE(c.fill_events[0].empty());
  EXPECT_EQ(c.fill_events[1], (std::set<EdgePair>{}));
  const auto g = Hypergraph::from_vertex_sets(5, {{0, 1, 4}, {1, 2}, {0, 2, 3, 4}, {2, 3}});
  const auto f = symbolic_ge_fill_equivalence(g, {0, 1, 2, 3});
  EXPECT_TRUE(f.equivalent());
  EXPECT_EQ(f.fill_events[0], (std::set<EdgePair>{}));
}

TEST(FillEquivalence, MiddleEdgeCreatesFill) {
  // Eliminating the middle edge of a path makes its two neighbours meet.
  const auto f = symbolic_ge_fill_equivalence(chain(4), {1, 0, 2});
  EXPECT_TRUE(f.equivalent());
  EXPECT_EQ(f.fill_events[0], (std::set<EdgePair>{{0, 2}}));
  EXPECT_EQ(f.growth_events[0], (std::set<EdgePair>{{0, 2}}));
}

TEST(FillEquivalence, RandomGraphsAndOrders) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_hypergraph(rng, 3 + rng.below(12), 1 + rng.below(12), 3);
    auto order = g.edge_ids();
    rng.shuffle(std::span(order));
    EXPECT_TRUE(symbolic_ge_fill_equivalence(g, order).equivalent());
  }
}

TEST(HeuristicNames, ParseRoundTrip) {
  for (const auto& h : greedy_heuristics()) EXPECT_EQ(Heuristic::parse(h.name()).name(), h.name());
  EXPECT_THROW(Heuristic::parse("mc3"), InvalidArgument);
}
