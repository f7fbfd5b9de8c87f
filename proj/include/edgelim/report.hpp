#pragma once

// JSON and CSV serialization of orderings, baselines and numeric diagnostics.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "edgelim/eliminator.hpp"
#include "edgelim/error.hpp"
#include "edgelim/ordering.hpp"

namespace edgelim {

using Json = nlohmann::ordered_json;

inline Json to_json(const CostReport& c) {
  return {{"per_step_sizes", c.per_step_sizes},
          {"total_roots", c.total_roots},
          {"total_root_cost", c.total_root_cost}};
}

inline Json to_json(const OrderStatistics& s) {
  return {{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"q3", s.q3}, {"max", s.max}};
}

inline Json to_json(const BaselineStats& b) {
  return {{"trials", b.trials},       {"seed", b.seed},
          {"rng", b.rng},             {"roots", to_json(b.roots)},
          {"cost", to_json(b.cost)},  {"raw_roots", b.raw_roots},
          {"raw_cost", b.raw_cost}};
}

inline Json to_json(const std::string& heuristic, const EliminationRun& run) {
  Json j = {{"heuristic", heuristic}, {"ordering", run.ordering}};
  j.update(to_json(run.cost));
  return j;
}

/// One row per step: step, edge_id, size, cum_roots, cum_cost.
inline void write_steps_csv(std::ostream& os, const Ordering& order, const CostReport& c) {
  if (order.size() != c.per_step_sizes.size())
    throw InvalidArgument("ordering and cost report differ in length");
  os << "step,edge_id,size,cum_roots,cum_cost\n";
  std::int64_t roots = 0;
  std::int64_t cost = 0;
  for (std::size_t s = 0; s < order.size(); ++s) {
    const auto size = c.per_step_sizes[s];
    roots += size;
    cost += size * size;
    os << s << "," << order[s] << "," << size << "," << roots << "," << cost << "\n";
  }
}

inline Json to_json(const EigResult& r) {
  return {{"n", r.lambda.size()},
          {"residual_eig", r.residual_eig},
          {"residual_orth", r.residual_orth},
          {"drop_tolerance", r.drop_tolerance},
          {"deflated", r.deflated},
          {"ordering", r.ordering},
          {"per_step_nnz", r.per_step_nnz},
          {"per_step_displacement", r.per_step_displacement},
          {"lambda", r.lambda}};
}

inline Json to_json(const ConsistencyReport& rep) {
  Json steps = Json::array();
  for (const auto& s : rep.steps) {
    if (!s.violation && !s.cancellation) continue;
    steps.push_back({{"step", s.step},
                     {"edge", s.edge},
                     {"predicted", s.predicted},
                     {"observed", s.observed},
                     {"violation", s.violation},
                     {"cancellation", s.cancellation}});
  }
  return {{"steps", rep.steps.size()},
          {"equal_steps", rep.equal_steps()},
          {"violations", rep.violations},
          {"cancellations", rep.cancellations},
          {"mismatched_steps", steps}};
}

/// Batch experiment description.
///
/// {"graph": "lattice:16x16" | "path/to/file.mtx",
///  "heuristics": ["mi", "mr", "mc1", "mc2"],
///  "baseline_trials": 20, "seed": 1, "out": "results"}
struct ExperimentConfig {
  std::string graph;
  std::vector<std::string> heuristics;
  std::size_t baseline_trials = 0;
  std::uint64_t seed = 0;
  std::string out = ".";

  void validate() const {
    if (graph.empty()) throw InvalidArgument("experiment config needs a graph");
    if (heuristics.empty() && baseline_trials == 0)
      throw InvalidArgument("experiment config requests neither heuristics nor a baseline");
    for (const auto& h : heuristics) (void)Heuristic::parse(h);
  }

  static ExperimentConfig from_json(const Json& j) {
    ExperimentConfig c;
    try {
      c.graph = j.at("graph").get<std::string>();
      c.heuristics = j.value("heuristics", std::vector<std::string>{});
      c.baseline_trials = j.value("baseline_trials", std::size_t{0});
      c.seed = j.value("seed", std::uint64_t{0});
      c.out = j.value("out", std::string("."));
    } catch (const Json::exception& e) {
      throw InvalidArgument(std::string("experiment config: ") + e.what());
    }
    c.validate();
    return c;
  }

  [[nodiscard]] Json to_json() const {
    return {{"graph", graph},
            {"heuristics", heuristics},
            {"baseline_trials", baseline_trials},
            {"seed", seed},
            {"rng", Rng::algorithm},
            {"out", out}};
  }
};

}  // namespace edgelim
