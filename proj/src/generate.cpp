#include "smallflow/generate.hpp"

#include <algorithm>
#include <numeric>

namespace smallflow::generate {
namespace {

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

PathInstance random_path_instance(Rng& rng, const PathParams& p) {
  const int n = uniform_int(rng, p.n_min, p.n_max);
  const int k = uniform_int(rng, 1, std::max(1, std::min(p.k_max, n / 2)));
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Vertex> xs(order.begin(), order.begin() + k);
  std::vector<Vertex> ys(order.begin() + k, order.begin() + 2 * k);

  const double density = std::uniform_real_distribution<double>(p.density_min, p.density_max)(rng);
  std::bernoulli_distribution keep(density), twin(p.parallel_edge_prob);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (u == v || !keep(rng)) continue;
      edges.push_back({u, v});
      if (twin(rng)) edges.push_back({u, v});
    }
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  std::optional<std::vector<Cost>> costs;
  if (p.max_cost > 0) {
    std::uniform_int_distribution<Cost> c(1, p.max_cost);
    costs.emplace();
    for (std::size_t i = 0; i < edges.size(); ++i) costs->push_back(c(rng));
  }
  return PathInstance(n, std::move(edges), std::move(xs), std::move(ys), std::move(costs));
}

PathInstance layered_instance(Rng& rng, int n, int k, int degree, Cost max_cost) {
  std::vector<Vertex> xs, ys;
  for (int i = 0; i < k; ++i) {
    xs.push_back(i);
    ys.push_back(n - k + i);
  }
  const int lo = k;
  const int hi = n - k - 1;  // inner vertices [lo, hi]
  std::vector<Edge> edges;
  for (int i = 0; i < k; ++i) {
    for (int d = 0; d < degree; ++d) {
      edges.push_back({xs[i], uniform_int(rng, lo, hi)});
      edges.push_back({uniform_int(rng, lo, hi), ys[i]});
    }
  }
  for (Vertex u = lo; u <= hi; ++u) {
    for (int d = 0; d < degree; ++d) {
      Vertex v = uniform_int(rng, lo, hi);
      if (v == u) v = v == hi ? lo : v + 1;
      edges.push_back({u, v});
    }
  }
  std::optional<std::vector<Cost>> costs;
  if (max_cost > 0) {
    std::uniform_int_distribution<Cost> c(1, max_cost);
    costs.emplace();
    for (std::size_t i = 0; i < edges.size(); ++i) costs->push_back(c(rng));
  }
  return PathInstance(n, std::move(edges), std::move(xs), std::move(ys), std::move(costs));
}

FlowInstance random_flow_instance(Rng& rng, const FlowParams& p) {
  FlowInstance f;
  f.n = uniform_int(rng, p.n_min, p.n_max);
  f.k = uniform_int(rng, 1, p.k_max);
  f.source = 0;
  f.sink = f.n - 1;
  const int arcs = uniform_int(rng, p.arcs_min, p.arcs_max);
  std::uniform_int_distribution<std::int64_t> cap(1, p.cap_max);
  std::uniform_int_distribution<Cost> cost(1, p.cost_max);
  for (int a = 0; a < arcs; ++a) {
    const Vertex u = uniform_int(rng, 0, f.n - 1);
    Vertex v = uniform_int(rng, 0, f.n - 2);
    if (v >= u) ++v;
    f.arcs.push_back({u, v, cap(rng), cost(rng)});
  }
  f.validate();
  return f;
}

}  // namespace smallflow::generate
