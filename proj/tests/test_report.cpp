#include <sstream>

#include <gtest/gtest.h>

#include "edgelim/report.hpp"

using namespace edgelim;

namespace {

Hypergraph chain(std::size_t n) {
  std::vector<VertexSet> sets;
  for (std::size_t i = 0; i + 1 < n; ++i)
    sets.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1)});
  return Hypergraph::from_vertex_sets(n, sets);
}

}  // namespace

TEST(Report, CostReportJson) {
  const auto run = run_elimination(chain(4), Heuristic::mr());
  const auto j = to_json("mr", run);
  EXPECT_EQ(j["heuristic"], "mr");
  EXPECT_EQ(j["total_roots"], 8);
  EXPECT_EQ(j["total_root_cost"], 4 + 4 + 16);
  EXPECT_EQ(j["ordering"].get<Ordering>(), run.ordering);
  EXPECT_EQ(j["per_step_sizes"].size(), 3u);
}

TEST(Report, StepsCsv) {
  std::ostringstream os;
  write_steps_csv(os, {1, 0, 2}, simulate_ordering(chain(4), {1, 0, 2}));
  EXPECT_EQ(os.str(), "step,edge_id,size,cum_roots,cum_cost\n0,1,2,2,4\n1,0,3,5,13\n2,2,4,9,29\n");
  EXPECT_THROW(write_steps_csv(os, {1}, simulate_ordering(chain(4), {1, 0, 2})), InvalidArgument);
}

TEST(Report, BaselineJsonRoundTripsFields) {
  const auto b = random_baseline(chain(16), 5, 3);
  const auto j = to_json(b);
  EXPECT_EQ(j["trials"], 5);
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["rng"], Rng::algorithm);
  EXPECT_EQ(j["raw_roots"].get<std::vector<std::int64_t>>(), b.raw_roots);
  EXPECT_EQ(j["roots"]["min"].get<double>(), b.roots.min);
  EXPECT_EQ(j["cost"]["max"].get<double>(), b.cost.max);
}

TEST(Report, EigResultJson) {
  const auto r = eliminate_all(HermitianInput(2, {0, 0}, {{1, 0, 1.0}}));
  const auto j = to_json(r);
  EXPECT_EQ(j["n"], 2);
  EXPECT_EQ(j["per_step_nnz"].get<std::vector<std::size_t>>(), (std::vector<std::size_t>{2}));
  EXPECT_TRUE(j.contains("residual_eig"));
  EXPECT_TRUE(j.contains("residual_orth"));
}

TEST(ExperimentConfig, ParsesValidatesAndSerializes) {
  const auto c = ExperimentConfig::from_json(Json::parse(
      R"({"graph": "lattice:16x16", "heuristics": ["mi", "mc2"], "baseline_trials": 20, "seed": 4})"));
  EXPECT_EQ(c.graph, "lattice:16x16");
  EXPECT_EQ(c.heuristics.size(), 2u);
  EXPECT_EQ(c.baseline_trials, 20u);
  EXPECT_EQ(ExperimentConfig::from_json(c.to_json()).to_json(), c.to_json());
  EXPECT_THROW(ExperimentConfig::from_json(Json::parse(R"({"graph": "chain:8"})")), InvalidArgument);
  EXPECT_THROW(ExperimentConfig::from_json(Json::parse(R"({"heuristics": ["mr"]})")), InvalidArgument);
  EXPECT_THROW(ExperimentConfig::from_json(Json::parse(R"({"graph": "chain:8", "heuristics": ["xx"]})")),
               InvalidArgument);
}
