#pragma once

#include <optional>
#include <vector>

#include "smallflow/network.hpp"

// Small hand-built instances shared by the unit tests. Vertex numbers in the
// comments are the 1-indexed file numbers.
namespace fixtures {

using smallflow::Cost;
using smallflow::PathInstance;

// 1 -> 2, k = 1.
inline PathInstance single_edge(std::optional<Cost> cost = std::nullopt) {
  std::optional<std::vector<Cost>> c;
  if (cost) c = std::vector<Cost>{*cost};
  return PathInstance(2, {{0, 1}}, {0}, {1}, c);
}

// x1 = 1, y1 = 3: direct edge 1 -> 3 and the detour 1 -> 2 -> 3.
inline PathInstance direct_and_detour() {
  return PathInstance(3, {{0, 2}, {0, 1}, {1, 2}}, {0}, {2});
}

// X = {1, 2}, Y = {3, 4}; edges in order x1y1, x1y2, x2y1, x2y2.
inline PathInstance bipartite_2x2(bool with_costs = false) {
  std::optional<std::vector<Cost>> c;
  if (with_costs) c = std::vector<Cost>{1, 2, 2, 1};
  return PathInstance(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}, {0, 1}, {2, 3}, c);
}

// X = {1, 2}, Y = {4, 5}, every route goes through vertex 3.
inline PathInstance shared_bottleneck() {
  return PathInstance(5, {{0, 2}, {1, 2}, {2, 3}, {2, 4}}, {0, 1}, {3, 4});
}

// X = {1}, Y = {4}, vertices 2 and 3 isolated.
inline PathInstance disconnected() {
  return PathInstance(4, {{1, 2}, {2, 1}}, {0}, {3}, std::vector<Cost>{1, 1});
}

}  // namespace fixtures
