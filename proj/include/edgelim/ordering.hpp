#pragma once

// Symbolic edge-elimination engine.
//
// The engine replays hyperedge eliminations on bit-matrix state (edge ->
// vertices, vertex -> edges, edge -> intersecting edges) and is driven either
// by a greedy heuristic (minimum incidence, minimum root number, look-ahead
// cost of order 1 or 2), a seeded random permutation, or a caller-supplied
// ordering. Costs are tracked as the size |x| of each edge when it is
// eliminated, i.e. the number of secular-equation roots that step needs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "edgelim/detail/bit_row.hpp"
#include "edgelim/error.hpp"
#include "edgelim/hypergraph.hpp"
#include "edgelim/random.hpp"

namespace edgelim {

using Ordering = std::vector<EdgeId>;

enum class HeuristicKind { MinIncidence, MinRoots, MinCost, Random, Given };

struct Heuristic {
  HeuristicKind kind = HeuristicKind::MinRoots;
  int k = 1;               // exponent for MinCost
  std::uint64_t seed = 0;  // Random
  Ordering order;          // Given

  static Heuristic mi() { return {HeuristicKind::MinIncidence, 1, 0, {}}; }
  static Heuristic mr() { return {HeuristicKind::MinRoots, 1, 0, {}}; }
  static Heuristic mc(int k) {
    if (k != 1 && k != 2) throw InvalidArgument("look-ahead exponent must be 1 or 2");
    return {HeuristicKind::MinCost, k, 0, {}};
  }
  static Heuristic random(std::uint64_t seed) { return {HeuristicKind::Random, 1, seed, {}}; }
  static Heuristic given(Ordering order) {
    return {HeuristicKind::Given, 1, 0, std::move(order)};
  }

  /// Accepts "mi", "mr", "mc1", "mc2".
  static Heuristic parse(const std::string& name) {
    if (name == "mi") return mi();
    if (name == "mr") return mr();
    if (name == "mc1") return mc(1);
    if (name == "mc2") return mc(2);
    throw InvalidArgument("unknown heuristic '" + name + "' (expected mi, mr, mc1, mc2)");
  }

  [[nodiscard]] std::string name() const {
    switch (kind) {
      case HeuristicKind::MinIncidence: return "mi";
      case HeuristicKind::MinRoots: return "mr";
      case HeuristicKind::MinCost: return k == 1 ? "mc1" : "mc2";
      case HeuristicKind::Random: return "random";
      case HeuristicKind::Given: return "given";
    }
    return "?";
  }
};

/// The four greedy heuristics, in the order reports list them.
inline std::vector<Heuristic> greedy_heuristics() {
  return {Heuristic::mi(), Heuristic::mr(), Heuristic::mc(1), Heuristic::mc(2)};
}

struct CostReport {
  std::vector<std::int64_t> per_step_sizes;
  std::int64_t total_roots = 0;      // sum |x|
  std::int64_t total_root_cost = 0;  // sum |x|^2

  void add_step(std::int64_t size) {
    per_step_sizes.push_back(size);
    total_roots += size;
    total_root_cost += size * size;
  }

  bool operator==(const CostReport&) const = default;
};

struct EliminationRun {
  Ordering ordering;
  CostReport cost;
};

struct EngineOptions {
  /// Recompute every score from the vertex->edge index after each step and
  /// check it against the incremental values (slow; for debugging).
  bool full_recompute = false;
  /// Count x itself among its incident edges for MinIncidence.
  bool mi_count_self = false;
};

/// Live state of one elimination run. Single-owner; the source hypergraph is
/// copied in and never touched again.
class SymbolicEngine {
 public:
  explicit SymbolicEngine(const Hypergraph& g)
      : n_vertices_(g.n_vertices()), live_(g.edge_count()) {
    const std::size_t m = g.edge_count();
    ids_.reserve(m);
    edge_vertices_.assign(m, detail::BitRow(n_vertices_));
    vertex_edges_.assign(n_vertices_, detail::BitRow(m));
    sizes_.assign(m, 0);
    for (std::size_t s = 0; s < m; ++s) {
      const auto& e = g.edges()[s];
      ids_.push_back(e.id);
      slot_of_.emplace(e.id, s);
      for (auto v : e.vertices) {
        edge_vertices_[s].set(v);
        vertex_edges_[v].set(s);
      }
      sizes_[s] = static_cast<std::int64_t>(e.vertices.size());
      live_.set(s);
    }
    live_count_ = m;
    adjacency_.assign(m, detail::BitRow(m));
    for (std::size_t s = 0; s < m; ++s) adjacency_[s] = neighbors_from_index(s);
  }

  [[nodiscard]] std::size_t edge_count() const noexcept { return ids_.size(); }
  [[nodiscard]] std::size_t live_count() const noexcept { return live_count_; }
  [[nodiscard]] std::size_t n_vertices() const noexcept { return n_vertices_; }

  [[nodiscard]] std::size_t slot(EdgeId id) const {
    const auto it = slot_of_.find(id);
    if (it == slot_of_.end()) throw InvalidArgument("unknown edge id " + std::to_string(id));
    return it->second;
  }
  [[nodiscard]] EdgeId id_at(std::size_t s) const { return ids_[s]; }
  [[nodiscard]] bool is_live(EdgeId id) const { return live_.test(slot(id)); }
  [[nodiscard]] bool slot_live(std::size_t s) const { return live_.test(s); }
  [[nodiscard]] const detail::BitRow& live_slots() const noexcept { return live_; }
  [[nodiscard]] const detail::BitRow& neighbors(std::size_t s) const { return adjacency_[s]; }
  [[nodiscard]] std::int64_t size_at(std::size_t s) const { return sizes_[s]; }

  [[nodiscard]] VertexSet vertices(EdgeId id) const {
    VertexSet out;
    edge_vertices_[live_slot(id)].for_each(
        [&](std::size_t v) { out.push_back(static_cast<VertexId>(v)); });
    return out;
  }

  /// Number of live edges other than x that meet x.
  [[nodiscard]] std::int64_t mu_i(EdgeId x) const { return mu_i_slot(live_slot(x)); }

  /// Current vertex count of x.
  [[nodiscard]] std::int64_t mu_r(EdgeId x) const { return sizes_[live_slot(x)]; }

  /// |x|^k + sum over live e != x meeting x of (|x u e|^k - |e|^k).
  [[nodiscard]] std::int64_t mu_c(EdgeId x, int k) const {
    if (k != 1 && k != 2) throw InvalidArgument("look-ahead exponent must be 1 or 2");
    return mu_c_slot(live_slot(x), k);
  }

  [[nodiscard]] std::int64_t mu_i_slot(std::size_t s) const {
    return static_cast<std::int64_t>(adjacency_[s].count());
  }
  [[nodiscard]] std::int64_t mu_c_slot(std::size_t s, int k) const {
    return mu_c_with(s, k, adjacency_[s]);
  }

  /// Live neighbors of slot s recomputed from the vertex->edge index.
  [[nodiscard]] detail::BitRow neighbors_from_index(std::size_t s) const {
    detail::BitRow out(ids_.size());
    edge_vertices_[s].for_each([&](std::size_t v) { out |= vertex_edges_[v]; });
    out &= live_;
    out.reset(s);
    return out;
  }

  [[nodiscard]] std::int64_t mu_c_with(std::size_t s, int k,
                                       const detail::BitRow& nbrs) const {
    const std::int64_t x = sizes_[s];
    std::int64_t total = ipow(x, k);
    nbrs.for_each([&](std::size_t e) {
      const auto u = static_cast<std::int64_t>(edge_vertices_[s].union_count(edge_vertices_[e]));
      total += ipow(u, k) - ipow(sizes_[e], k);
    });
    return total;
  }

  /// Eliminates x. Returns |x| at elimination time; `touched` receives the
  /// slots of the edges that met x (they now all contain x).
  std::int64_t eliminate(EdgeId x, detail::BitRow* touched = nullptr) {
    const std::size_t s = live_slot(x);
    const detail::BitRow nbrs = adjacency_[s];
    const std::int64_t size = sizes_[s];
    const auto& xv = edge_vertices_[s];

    nbrs.for_each([&](std::size_t e) {
      edge_vertices_[e] |= xv;
      sizes_[e] = static_cast<std::int64_t>(edge_vertices_[e].count());
      adjacency_[e] |= nbrs;
      adjacency_[e].reset(e);
      adjacency_[e].reset(s);
    });
    xv.for_each([&](std::size_t v) {
      vertex_edges_[v] |= nbrs;
      vertex_edges_[v].reset(s);
    });
    live_.reset(s);
    --live_count_;
    if (touched) *touched = nbrs;
    return size;
  }

  /// Current live edges as a hypergraph value (edge order = original order).
  [[nodiscard]] Hypergraph snapshot() const {
    std::vector<HyperEdge> edges;
    live_.for_each([&](std::size_t s) {
      HyperEdge e{ids_[s], {}};
      edge_vertices_[s].for_each(
          [&](std::size_t v) { e.vertices.push_back(static_cast<VertexId>(v)); });
      edges.push_back(std::move(e));
    });
    return {n_vertices_, std::move(edges)};
  }

 private:
  static std::int64_t ipow(std::int64_t v, int k) { return k == 1 ? v : v * v; }

  [[nodiscard]] std::size_t live_slot(EdgeId id) const {
    const std::size_t s = slot(id);
    if (!live_.test(s)) throw InvalidArgument("edge " + std::to_string(id) + " already eliminated");
    return s;
  }

  std::size_t n_vertices_;
  std::vector<EdgeId> ids_;
  std::unordered_map<EdgeId, std::size_t> slot_of_;
  std::vector<detail::BitRow> edge_vertices_;  // slot -> vertices
  std::vector<detail::BitRow> vertex_edges_;   // vertex -> live slots containing it
  std::vector<detail::BitRow> adjacency_;      // slot -> live slots meeting it
  std::vector<std::int64_t> sizes_;
  detail::BitRow live_;
  std::size_t live_count_ = 0;
};

// Convenience wrappers evaluating a score on a fresh hypergraph.
inline std::int64_t mu_i(const Hypergraph& g, EdgeId x) { return SymbolicEngine(g).mu_i(x); }
inline std::int64_t mu_r(const Hypergraph& g, EdgeId x) { return SymbolicEngine(g).mu_r(x); }
inline std::int64_t mu_c(const Hypergraph& g, EdgeId x, int k) {
  return SymbolicEngine(g).mu_c(x, k);
}

/// Per-step view handed to an observer (used to reproduce step-by-step
/// figures). Scores are those the heuristic compared when choosing.
struct StepSnapshot {
  std::size_t step = 0;
  EdgeId chosen = 0;
  std::int64_t size = 0;
  struct Entry {
    EdgeId id;
    VertexSet vertices;
    std::int64_t score;
  };
  std::vector<Entry> live;
};

using StepObserver = std::function<void(const StepSnapshot&)>;

/// Replays `order` and reports its cost. Throws unless `order` is a
/// permutation of the edge ids of g.
inline CostReport simulate_ordering(const Hypergraph& g, const Ordering& order) {
  if (order.size() != g.edge_count())
    throw InvalidArgument("ordering has " + std::to_string(order.size()) + " entries, graph has " +
                          std::to_string(g.edge_count()) + " edges");
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  auto ids = g.edge_ids();
  std::sort(ids.begin(), ids.end());
  if (sorted != ids) throw InvalidArgument("ordering is not a permutation of the edge ids");

  SymbolicEngine engine(g);
  CostReport report;
  for (auto x : order) report.add_step(engine.eliminate(x));
  return report;
}

namespace detail {

inline std::int64_t score(const SymbolicEngine& engine, std::size_t s, const Heuristic& h,
                          const EngineOptions& opts, const BitRow* nbrs = nullptr) {
  switch (h.kind) {
    case HeuristicKind::MinIncidence: {
      const auto c = nbrs ? static_cast<std::int64_t>(nbrs->count()) : engine.mu_i_slot(s);
      return c + (opts.mi_count_self ? 1 : 0);
    }
    case HeuristicKind::MinRoots: return engine.size_at(s);
    case HeuristicKind::MinCost:
      return nbrs ? engine.mu_c_with(s, h.k, *nbrs) : engine.mu_c_slot(s, h.k);
    default: throw std::logic_error("not a greedy heuristic");
  }
}

}  // namespace detail

/// Eliminates every edge of g. Greedy heuristics pick the live edge with the
/// smallest score, ties going to the smallest edge id; Random and Given
/// replay a fixed permutation.
inline EliminationRun run_elimination(const Hypergraph& g, const Heuristic& h,
                                      const EngineOptions& opts = {},
                                      const StepObserver& observer = {}) {
  EliminationRun run;
  if (h.kind == HeuristicKind::Random || h.kind == HeuristicKind::Given) {
    if (h.kind == HeuristicKind::Given) {
      run.ordering = h.order;
    } else {
      run.ordering = g.edge_ids();
      Rng rng(h.seed);
      rng.shuffle(std::span<EdgeId>(run.ordering));
    }
    run.cost = simulate_ordering(g, run.ordering);
    return run;
  }

  SymbolicEngine engine(g);
  const std::size_t m = engine.edge_count();
  std::vector<std::int64_t> scores(m, 0);
  for (std::size_t s = 0; s < m; ++s) scores[s] = detail::score(engine, s, h, opts);

  detail::BitRow touched(m);
  detail::BitRow affected(m);
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t best = m;
    engine.live_slots().for_each([&](std::size_t s) {
      if (best == m || scores[s] < scores[best] ||
          (scores[s] == scores[best] && engine.id_at(s) < engine.id_at(best)))
        best = s;
    });
    const EdgeId x = engine.id_at(best);

    if (observer) {
      StepSnapshot snap{step, x, engine.size_at(best), {}};
      engine.live_slots().for_each([&](std::size_t s) {
        snap.live.push_back({engine.id_at(s), engine.vertices(engine.id_at(s)), scores[s]});
      });
      observer(snap);
    }

    run.ordering.push_back(x);
    run.cost.add_step(engine.eliminate(x, &touched));

    // Scores that can change: the edges that met x, and for the look-ahead
    // score also everything meeting those.
    affected = touched;
    if (h.kind == HeuristicKind::MinCost)
      touched.for_each([&](std::size_t e) { affected |= engine.neighbors(e); });
    affected &= engine.live_slots();
    affected.for_each([&](std::size_t s) { scores[s] = detail::score(engine, s, h, opts); });

    if (opts.full_recompute) {
      engine.live_slots().for_each([&](std::size_t s) {
        const auto nbrs = engine.neighbors_from_index(s);
        if (!(nbrs == engine.neighbors(s)))
          throw std::logic_error("incremental adjacency diverged at step " + std::to_string(step));
        const auto fresh = detail::score(engine, s, h, opts, &nbrs);
        if (fresh != scores[s])
          throw std::logic_error("incremental score of edge " + std::to_string(engine.id_at(s)) +
                                 " diverged at step " + std::to_string(step));
      });
    }
  }
  return run;
}

struct OrderStatistics {
  double min = 0;
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double max = 0;

  bool operator==(const OrderStatistics&) const = default;
};

/// Quartiles by linear interpolation between order statistics.
inline OrderStatistics order_statistics(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("order statistics of an empty sample");
  std::sort(values.begin(), values.end());
  auto q = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {values.front(), q(0.25), q(0.5), q(0.75), values.back()};
}

struct BaselineStats {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string rng = Rng::algorithm;
  OrderStatistics roots;
  OrderStatistics cost;
  std::vector<std::int64_t> raw_roots;
  std::vector<std::int64_t> raw_cost;

  bool operator==(const BaselineStats&) const = default;
};

/// Thread count from EDGELIM_THREADS, defaulting to 1.
inline std::size_t default_thread_count() {
  if (const char* env = std::getenv("EDGELIM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

/// `trials` uniform random orderings; trial i is seeded with seed + i, so the
/// result does not depend on `threads`.
inline BaselineStats random_baseline(const Hypergraph& g, std::size_t trials, std::uint64_t seed,
                                     std::size_t threads = 1) {
  if (trials == 0) throw InvalidArgument("baseline needs at least one trial");
  BaselineStats stats;
  stats.trials = trials;
  stats.seed = seed;
  stats.raw_roots.assign(trials, 0);
  stats.raw_cost.assign(trials, 0);

  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const auto run = run_elimination(g, Heuristic::random(seed + t));
      stats.raw_roots[t] = run.cost.total_roots;
      stats.raw_cost[t] = run.cost.total_root_cost;
    }
  };
  threads = std::clamp<std::size_t>(threads, 1, trials);
  if (threads == 1) {
    run_range(0, trials);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (trials + threads - 1) / threads;
    for (std::size_t b = 0; b < trials; b += chunk)
      pool.emplace_back(run_range, b, std::min(trials, b + chunk));
  }

  stats.roots = order_statistics({stats.raw_roots.begin(), stats.raw_roots.end()});
  stats.cost = order_statistics({stats.raw_cost.begin(), stats.raw_cost.end()});
  return stats;
}

enum class CostMeasure { Roots, Cost };

struct OptimalOrdering {
  Ordering ordering;
  std::int64_t value = 0;
};

inline constexpr std::size_t kBruteForceEdgeLimit = 10;

/// Exhaustive search over all orderings, memoized on the live hypergraph.
inline OptimalOrdering brute_force_optimal(const Hypergraph& g, CostMeasure measure) {
  if (g.edge_count() > kBruteForceEdgeLimit)
    throw InvalidArgument("brute force limited to " + std::to_string(kBruteForceEdgeLimit) +
                          " edges, graph has " + std::to_string(g.edge_count()));

  using Key = std::vector<HyperEdge>;
  struct Lt {
    bool operator()(const Key& a, const Key& b) const {
      return std::lexicographical_compare(
          a.begin(), a.end(), b.begin(), b.end(), [](const HyperEdge& x, const HyperEdge& y) {
            return std::tie(x.id, x.vertices) < std::tie(y.id, y.vertices);
          });
    }
  };
  std::map<Key, std::pair<std::int64_t, EdgeId>, Lt> memo;

  std::function<std::int64_t(const Hypergraph&)> solve = [&](const Hypergraph& h) -> std::int64_t {
    if (h.edge_count() == 0) return 0;
    if (auto it = memo.find(h.edges()); it != memo.end()) return it->second.first;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    EdgeId choice = 0;
    for (const auto& e : h.edges()) {
      const auto size = static_cast<std::int64_t>(e.vertices.size());
      const std::int64_t step = measure == CostMeasure::Roots ? size : size * size;
      const std::int64_t total = step + solve(eliminate_edge(h, e.id));
      if (total < best || (total == best && e.id < choice)) {
        best = total;
        choice = e.id;
      }
    }
    memo.emplace(h.edges(), std::make_pair(best, choice));
    return best;
  };

  OptimalOrdering out;
  out.value = solve(g);
  Hypergraph h = g;
  while (h.edge_count() > 0) {
    const EdgeId x = memo.at(h.edges()).second;
    out.ordering.push_back(x);
    h = eliminate_edge(h, x);
  }
  return out;
}

using EdgePair = std::pair<EdgeId, EdgeId>;  // (smaller id, larger id)

struct FillEquivalence {
  /// Per pivot: pairs made structurally nonzero by symbolic Gaussian
  /// elimination on the edge-edge adjacency pattern.
  std::vector<std::set<EdgePair>> fill_events;
  /// Per elimination: pairs of live edges that start intersecting.
  std::vector<std::set<EdgePair>> growth_events;
  /// Reduced adjacency pattern equals the eliminated hypergraph's A_E after
  /// every step (live edges only).
  bool structures_match = true;

  [[nodiscard]] bool equivalent() const {
    return structures_match && fill_events == growth_events;
  }
};

/// Runs symbolic Gaussian elimination on pattern(A_E) with pivot order `order`
/// next to hypergraph edge elimination in the same order.
inline FillEquivalence symbolic_ge_fill_equivalence(const Hypergraph& g, const Ordering& order) {
  (void)simulate_ordering(g, order);  // validates the permutation

  auto ordered = [](EdgeId a, EdgeId b) { return a < b ? EdgePair{a, b} : EdgePair{b, a}; };
  auto intersecting_pairs = [&](const Hypergraph& h) {
    std::set<EdgePair> out;
    const auto& es = h.edges();
    for (std::size_t i = 0; i < es.size(); ++i)
      for (std::size_t j = i + 1; j < es.size(); ++j)
        if (sets::intersects(es[i].vertices, es[j].vertices))
          out.insert(ordered(es[i].id, es[j].id));
    return out;
  };

  // Gaussian elimination side: an explicit symmetric pattern over edge ids.
  const auto ae = adjacency_matrices(g).edge;
  std::map<EdgeId, std::set<EdgeId>> pattern;
  for (const auto& e : g.edges()) pattern[e.id];
  for (const auto& [r, c] : ae.nonzeros())
    if (r != c) pattern[g.edges()[r].id].insert(g.edges()[c].id);

  FillEquivalence out;
  Hypergraph h = g;
  for (auto pivot : order) {
    std::set<EdgePair> fill;
    const std::vector<EdgeId> nbrs(pattern[pivot].begin(), pattern[pivot].end());
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
      for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
        if (pattern[nbrs[a]].insert(nbrs[b]).second) {
          pattern[nbrs[b]].insert(nbrs[a]);
          fill.insert(ordered(nbrs[a], nbrs[b]));
        }
      }
    }
    for (auto v : nbrs) pattern[v].erase(pivot);
    pattern.erase(pivot);
    out.fill_events.push_back(std::move(fill));

    auto before = intersecting_pairs(h);
    h = eliminate_edge(h, pivot);
    const auto after = intersecting_pairs(h);
    std::set<EdgePair> growth;
    for (const auto& p : after)
      if (!before.contains(p)) growth.insert(p);
    out.growth_events.push_back(std::move(growth));

    std::set<EdgePair> reduced;
    for (const auto& [r, cs] : pattern)
      for (auto c : cs)
        if (r < c) reduced.insert({r, c});
    if (reduced != after) out.structures_match = false;
  }
  return out;
}

}  // namespace edgelim
