#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

namespace smallflow::oracle::detail {

// Successive shortest paths on a residual graph with Johnson potentials.
// All arc costs must be nonnegative when added.
class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes) : adj_(nodes) {}

  // Returns the arc index; its flow is readable through flow().
  int add_arc(int u, int v, std::int64_t cap, std::int64_t cost) {
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({v, cap, cost});
    adj_[u].push_back(id);
    arcs_.push_back({u, 0, -cost});
    adj_[v].push_back(id + 1);
    return id;
  }

  std::int64_t flow(int arc) const { return arcs_[arc ^ 1].cap; }

  // Ships up to `want` units; returns the cost if all of them fit.
  std::optional<std::int64_t> run(int s, int t, std::int64_t want) {
    const int n = static_cast<int>(adj_.size());
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
    std::vector<std::int64_t> pot(n, 0), dist(n);
    std::vector<int> via(n);
    std::int64_t shipped = 0, cost = 0;
    while (shipped < want) {
      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(via.begin(), via.end(), -1);
      using Item = std::pair<std::int64_t, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      dist[s] = 0;
      heap.push({0, s});
      while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d != dist[u]) continue;
        for (int a : adj_[u]) {
          const Arc& arc = arcs_[a];
          if (arc.cap <= 0) continue;
          const std::int64_t nd = d + arc.cost + pot[u] - pot[arc.to];
          if (nd < dist[arc.to]) {
            dist[arc.to] = nd;
            via[arc.to] = a;
            heap.push({nd, arc.to});
          }
        }
      }
      if (dist[t] >= kInf) return std::nullopt;
      for (int v = 0; v < n; ++v) {
        if (dist[v] < kInf) pot[v] += dist[v];
      }
      std::int64_t push = want - shipped;
      for (int v = t; v != s; v = arcs_[via[v] ^ 1].to) push = std::min(push, arcs_[via[v]].cap);
      for (int v = t; v != s; v = arcs_[via[v] ^ 1].to) {
        arcs_[via[v]].cap -= push;
        arcs_[via[v] ^ 1].cap += push;
        cost += push * arcs_[via[v]].cost;
      }
      shipped += push;
    }
    return cost;
  }

 private:
  struct Arc {
    int to;
    std::int64_t cap;
    std::int64_t cost;
  };
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
};

}  // namespace smallflow::oracle::detail
