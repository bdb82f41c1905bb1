#pragma once

#include "smallflow/network.hpp"
#include "smallflow/rng.hpp"

// Seeded random instances for tests, acceptance runs and benchmarks.
namespace smallflow::generate {

struct PathParams {
  int n_min = 4;
  int n_max = 8;
  int k_max = 3;
  double density_min = 0.15;  // probability of each ordered pair
  double density_max = 0.45;
  double parallel_edge_prob = 0.05;
  Cost max_cost = 0;  // 0 leaves the instance without explicit costs
};

PathInstance random_path_instance(Rng& rng, const PathParams& p);

// n vertices, k terminal pairs, every inner vertex with `degree` random
// out-neighbours, every source and sink wired to a few inner vertices.
// Unit costs. Used by the benchmarks.
PathInstance layered_instance(Rng& rng, int n, int k, int degree, Cost max_cost = 0);

struct FlowParams {
  int n_min = 3;
  int n_max = 7;
  int k_max = 3;
  int arcs_min = 3;
  int arcs_max = 12;
  std::int64_t cap_max = 3;
  Cost cost_max = 4;
};

FlowInstance random_flow_instance(Rng& rng, const FlowParams& p);

}  // namespace smallflow::generate
