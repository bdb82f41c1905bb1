#include "smallflow/flow.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace smallflow::flow {

FlowInstance clamp_capacities(const FlowInstance& K) {
  FlowInstance out = K;
  for (Arc& a : out.arcs) a.capacity = std::min<std::int64_t>(a.capacity, K.k);
  return out;
}

GadgetNetwork build_gadget_network(const FlowInstance& K) {
  K.validate();
  for (const Arc& a : K.arcs) {
    if (a.capacity > K.k) throw InstanceError("capacities must be clamped to k first");
  }
  struct {
    std::vector<GadgetEdge> backmap;
    std::vector<UnitVertex> units;
    Cost scale;
    int arcs;
  } g{{}, {}, Cost{K.k} * K.n + 1, static_cast<int>(K.arcs.size())};

  // Canonical order: (vertex, direction, arc, unit).
  using Key = std::tuple<Vertex, bool, int, int>;
  std::vector<Key> keys;
  for (int a = 0; a < g.arcs; ++a) {
    for (int i = 0; i < K.arcs[a].capacity; ++i) {
      keys.emplace_back(K.arcs[a].to, false, a, i);
      keys.emplace_back(K.arcs[a].from, true, a, i);
    }
  }
  std::sort(keys.begin(), keys.end());
  std::map<Key, Vertex> id;
  std::vector<std::vector<Vertex>> ins(K.n), outs(K.n);
  for (const Key& key : keys) {
    const auto [v, out, a, i] = key;
    const Vertex u = static_cast<Vertex>(g.units.size());
    id[key] = u;
    g.units.push_back({v, out, a, i});
    (out ? outs : ins)[v].push_back(u);
  }
  const int nu = static_cast<int>(g.units.size());
  std::vector<Vertex> xs, ys;
  for (int j = 0; j < K.k; ++j) xs.push_back(nu + j);
  for (int j = 0; j < K.k; ++j) ys.push_back(nu + K.k + j);

  std::vector<Edge> edges;
  std::vector<Cost> costs;
  auto add = [&](Vertex a, Vertex b, Cost c, GadgetEdge origin) {
    edges.push_back({a, b});
    costs.push_back(c);
    g.backmap.push_back(origin);
  };
  for (Vertex v = 0; v < K.n; ++v) {
    for (Vertex a : ins[v]) {
      for (Vertex b : outs[v]) add(a, b, 1, {GadgetRole::kUnit, v, -1, -1});
    }
  }
  for (int a = 0; a < g.arcs; ++a) {
    const Arc& arc = K.arcs[a];
    for (int i = 0; i < arc.capacity; ++i) {
      add(id.at({arc.from, true, a, i}), id.at({arc.to, false, a, i}), arc.cost * g.scale,
          {GadgetRole::kTransport, -1, a, i});
    }
  }
  for (Vertex x : xs) {
    for (Vertex b : outs[K.source]) add(x, b, 1, {GadgetRole::kConnector});
  }
  for (Vertex a : ins[K.sink]) {
    for (Vertex y : ys) add(a, y, 1, {GadgetRole::kConnector});
  }
  return GadgetNetwork{PathInstance(nu + 2 * K.k, std::move(edges), xs, ys, std::move(costs)),
                       std::move(g.backmap), std::move(g.units), g.scale, g.arcs};
}

Cost extract_cost(Cost gadget_cost, Cost scale) { return gadget_cost / scale; }

Flow recover_flow(const PathSet& paths, const GadgetNetwork& g, const FlowInstance& K) {
  if (static_cast<int>(K.arcs.size()) != g.arcs) {
    throw InstanceError("flow instance does not match the gadget network");
  }
  Flow f;
  f.amount.assign(K.arcs.size(), 0);
  for (const Walk& w : paths.paths) {
    for (EdgeId e : w.edges) {
      if (e < 0 || e >= g.network.m()) {
        throw InstanceError("edge " + std::to_string(e) + " is not a gadget edge");
      }
      const GadgetEdge& origin = g.backmap[e];
      if (origin.role == GadgetRole::kTransport) ++f.amount[origin.arc];
    }
  }
  for (std::size_t a = 0; a < K.arcs.size(); ++a) {
    f.cost += f.amount[a] * K.arcs[a].cost;
    if (K.arcs[a].from == K.source) f.value += f.amount[a];
    if (K.arcs[a].to == K.source) f.value -= f.amount[a];
  }
  return f;
}

std::optional<std::string> flow_violation(const FlowInstance& K, const Flow& f) {
  if (f.amount.size() != K.arcs.size()) return "flow has " + std::to_string(f.amount.size()) +
                                                " entries for " + std::to_string(K.arcs.size()) + " arcs";
  std::vector<std::int64_t> net(K.n, 0);
  Cost cost = 0;
  for (std::size_t a = 0; a < K.arcs.size(); ++a) {
    const Arc& arc = K.arcs[a];
    if (f.amount[a] < 0 || f.amount[a] > arc.capacity) {
      return "capacity at arc " + std::to_string(a + 1) + ": flow " + std::to_string(f.amount[a]) +
             " outside [0, " + std::to_string(arc.capacity) + "]";
    }
    net[arc.from] += f.amount[a];
    net[arc.to] -= f.amount[a];
    cost += f.amount[a] * arc.cost;
  }
  for (Vertex v = 0; v < K.n; ++v) {
    if (v == K.source || v == K.sink) continue;
    if (net[v] != 0) return "conservation at vertex " + std::to_string(v + 1);
  }
  if (net[K.source] != K.k || net[K.sink] != -K.k || f.value != K.k) {
    return "value: " + std::to_string(net[K.source]) + " leaves the source, k = " + std::to_string(K.k);
  }
  if (cost != f.cost) {
    return "recorded cost " + std::to_string(f.cost) + " differs from actual " + std::to_string(cost);
  }
  return std::nullopt;
}

std::optional<FlowResult> min_cost_flow(const FlowInstance& K, const TestParams& params,
                                        const ExtractOptions& options) {
  const FlowInstance clamped = clamp_capacities(K);
  const GadgetNetwork g = build_gadget_network(clamped);
  ExtractionReport report = extract_disjoint_paths(g.network, params, options);
  if (!report.min_cost) return std::nullopt;
  if (report.exhausted) {
    throw ExtractionError("no flow recovered after " + std::to_string(report.attempts.size()) +
                              " attempts; last: " + report.attempts.back().outcome,
                          std::move(report));
  }
  FlowResult out;
  out.flow = recover_flow(*report.paths, g, clamped);
  out.cost = extract_cost(report.paths->cost, g.scale);
  if (auto bad = flow_violation(K, out.flow)) {
    throw std::logic_error("recovered flow is invalid: " + *bad);
  }
  if (out.cost != out.flow.cost) {
    throw std::logic_error("gadget cost " + std::to_string(out.cost) + " differs from flow cost " +
                           std::to_string(out.flow.cost));
  }
  out.report = std::move(report);
  return out;
}

}  // namespace smallflow::flow
