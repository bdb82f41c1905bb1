#include <doctest.h>

#include <set>

#include "smallflow/flow.hpp"
#include "smallflow/generate.hpp"
#include "smallflow/oracle.hpp"

using namespace smallflow;
using namespace smallflow::flow;

namespace {

FlowInstance make(int n, std::vector<Arc> arcs, int k, Vertex s = 0, Vertex t = -1) {
  FlowInstance K;
  K.n = n;
  K.arcs = std::move(arcs);
  K.k = k;
  K.source = s;
  K.sink = t < 0 ? n - 1 : t;
  return K;
}

bool starts_with(const std::optional<std::string>& s, const std::string& prefix) {
  return s && s->rfind(prefix, 0) == 0;
}

}  // namespace

TEST_CASE("clamping capacities to k") {
  const FlowInstance K = make(2, {{0, 1, 1000000, 3}, {0, 1, 1, 2}}, 2);
  const FlowInstance c = clamp_capacities(K);
  CHECK(c.arcs[0].capacity == 2);
  CHECK(c.arcs[1].capacity == 1);
  CHECK(clamp_capacities(c) == c);

  generate::FlowParams fp;
  fp.cap_max = 8;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto rng = make_rng(seed, {81});
    const FlowInstance R = generate::random_flow_instance(rng, fp);
    const auto a = oracle::classic_min_cost_flow(R);
    const auto b = oracle::classic_min_cost_flow(clamp_capacities(R));
    CAPTURE(seed);
    REQUIRE(static_cast<bool>(a) == static_cast<bool>(b));
    if (a) CHECK(a->cost == b->cost);
  }
}

TEST_CASE("gadget for a single arc") {
  const FlowInstance K = make(2, {{0, 1, 1, 1}}, 1);
  const GadgetNetwork g = build_gadget_network(K);
  const Cost M = 1 * 2 + 1;
  CHECK(g.scale == M);
  // s_out(e, 1), t_in(e, 1), one source, one sink.
  CHECK(g.network.n() == 4);
  CHECK(g.network.m() == 3);
  CHECK(g.units.size() == 2);
  const auto best = oracle::disjoint_paths_by_flow(g.network);
  REQUIRE(best);
  CHECK(best->value == M + 2);
  CHECK(extract_cost(best->value, g.scale) == 1);
  const Flow f = recover_flow(best->paths, g, K);
  CHECK(f.amount == std::vector<std::int64_t>{1});
  CHECK(f.value == 1);
  CHECK(f.cost == 1);
  CHECK(validate_flow(K, f));
}

TEST_CASE("gadget unit copies and unit edges") {
  // Vertex 2 has in-arcs of capacity 1 and 2 and one out-arc of capacity 1.
  const FlowInstance K = make(4, {{0, 1, 1, 1}, {0, 1, 2, 1}, {1, 3, 1, 1}, {0, 3, 1, 5}}, 2);
  const GadgetNetwork g = build_gadget_network(K);
  int in_units = 0, out_units = 0, unit_edges = 0;
  for (const UnitVertex& u : g.units) {
    if (u.vertex == 1) (u.out ? out_units : in_units)++;
  }
  for (const GadgetEdge& e : g.backmap) unit_edges += e.role == GadgetRole::kUnit && e.vertex == 1;
  CHECK(in_units == 3);
  CHECK(out_units == 1);
  CHECK(unit_edges == 3);
  CHECK(g.scale == 2 * 4 + 1);
  // Canonical order: sorted by (vertex, direction, arc, unit).
  for (std::size_t i = 1; i < g.units.size(); ++i) {
    const auto& a = g.units[i - 1];
    const auto& b = g.units[i];
    CHECK(std::tuple(a.vertex, a.out, a.arc, a.unit) < std::tuple(b.vertex, b.out, b.arc, b.unit));
  }
  CHECK(build_gadget_network(K).network == g.network);
  CHECK_THROWS_AS(build_gadget_network(make(2, {{0, 1, 3, 1}}, 2)), InstanceError);
}

TEST_CASE("cost extraction is floor division") {
  CHECK(extract_cost(47, 23) == 2);
  CHECK(extract_cost(23 * 9, 23) == 9);
  CHECK(extract_cost(5, 3) == 1);
}

TEST_CASE("flow validation names the violated constraint") {
  const FlowInstance K = make(4, {{0, 1, 1, 1}, {1, 3, 1, 1}, {0, 2, 1, 1}, {2, 3, 1, 1}}, 2);
  CHECK(validate_flow(K, {{1, 1, 1, 1}, 2, 4}));
  CHECK(starts_with(flow_violation(K, {{1, 1, 0, 0}, 1, 2}), "value"));
  CHECK(starts_with(flow_violation(K, {{2, 2, 0, 0}, 2, 4}), "capacity at arc 1"));
  CHECK(starts_with(flow_violation(K, {{1, 0, 1, 1}, 2, 3}), "conservation at vertex 2"));
  CHECK(starts_with(flow_violation(K, {{1, 1, 1, 1}, 2, 5}), "recorded cost"));
  CHECK(flow_violation(K, {{1, 1}, 2, 2}));
}

TEST_CASE("recover_flow rejects foreign paths") {
  const FlowInstance K = make(2, {{0, 1, 1, 1}}, 1);
  const GadgetNetwork g = build_gadget_network(K);
  PathSet bogus{{Walk{2, {0, 99}}}, 0};
  CHECK_THROWS_AS(recover_flow(bogus, g, K), InstanceError);
}

TEST_CASE("min-cost flow examples") {
  TestParams p;
  // Two disjoint routes s-a-t and s-b-t.
  const FlowInstance two = make(4, {{0, 1, 1, 1}, {1, 3, 1, 1}, {0, 2, 1, 1}, {2, 3, 1, 1}}, 2);
  const auto r = min_cost_flow(two, p);
  REQUIRE(r);
  CHECK(r->cost == 4);
  CHECK(r->flow.amount == std::vector<std::int64_t>{1, 1, 1, 1});
  CHECK(oracle::classic_min_cost_flow(two)->cost == 4);

  // Max flow 1 < k = 2.
  const FlowInstance thin = make(3, {{0, 1, 1, 1}, {1, 2, 5, 1}}, 2);
  CHECK_FALSE(oracle::classic_min_cost_flow(thin));
  CHECK_FALSE(min_cost_flow(thin, p));

  // Both units pass through vertex 2 on capacity-2 arcs; the direct arc is dear.
  const FlowInstance diamond = make(3, {{0, 1, 2, 1}, {1, 2, 2, 1}, {0, 2, 1, 10}}, 2);
  const auto d = min_cost_flow(diamond, p);
  REQUIRE(d);
  CHECK(d->cost == oracle::classic_min_cost_flow(diamond)->cost);
  CHECK(d->cost == 4);
  CHECK(d->flow.amount == std::vector<std::int64_t>{2, 2, 0});
}

TEST_CASE("reduction soundness against the classical oracle") {
  generate::FlowParams fp;
  int feasible = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto rng = make_rng(seed, {82});
    const FlowInstance K = clamp_capacities(generate::random_flow_instance(rng, fp));
    const GadgetNetwork g = build_gadget_network(K);
    const auto classic = oracle::classic_min_cost_flow(K);
    const auto paths = oracle::disjoint_paths_by_flow(g.network);
    CAPTURE(seed);
    REQUIRE(static_cast<bool>(classic) == static_cast<bool>(paths));
    if (!classic) continue;
    ++feasible;
    CHECK(extract_cost(paths->value, g.scale) == classic->cost);
    CHECK(paths->value % g.scale <= Cost{K.k} * K.n);
    const Flow f = recover_flow(paths->paths, g, K);
    CHECK(validate_flow(K, f));
    CHECK(f.cost == classic->cost);
  }
  CHECK(feasible > 40);
}

TEST_CASE("residue bound on every enumerated path set of small gadgets") {
  generate::FlowParams fp;
  fp.n_max = 4;
  fp.arcs_min = 4;
  fp.arcs_max = 7;
  fp.k_max = 2;
  fp.cap_max = 2;
  int sets = 0, feasible = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto rng = make_rng(seed, {83});
    const FlowInstance K = clamp_capacities(generate::random_flow_instance(rng, fp));
    const GadgetNetwork g = build_gadget_network(K);
    const auto best = oracle::disjoint_paths_by_flow(g.network);
    if (!best) continue;
    ++feasible;
    for (Cost total = best->value; total <= best->value + 2 * g.scale; ++total) {
      oracle::enumerate_proper_walk_sets(
          g.network, {oracle::BoundMode::kCostExactly, total}, [&](const ProperWalkSet& s) {
            if (!oracle::walks_simple(g.network, s) || oracle::signature(g.network, s)) return;
            Cost transport = 0, aux = 0;
            std::set<std::pair<int, Vertex>> visits;
            bool simple_in_k = true;
            for (std::size_t i = 0; i < s.size(); ++i) {
              for (EdgeId e : s[i].edges) {
                const GadgetEdge& o = g.backmap[e];
                if (o.role == GadgetRole::kTransport) {
                  transport += K.arcs[o.arc].cost;
                } else {
                  ++aux;
                }
                if (o.role == GadgetRole::kUnit) simple_in_k &= visits.insert({int(i), o.vertex}).second;
              }
            }
            CHECK(total == transport * g.scale + aux);
            if (simple_in_k) {
              CHECK(aux <= Cost{K.k} * K.n);
              CHECK(extract_cost(total, g.scale) == transport);
            }
            ++sets;
          });
    }
  }
  CHECK(feasible > 50);
  CHECK(sets > 2 * feasible);
}

TEST_CASE("pipeline flows are valid and optimal at desk r = max(64, 4m)") {
  generate::FlowParams fp;
  TestParams p;
  int feasible = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto rng = make_rng(seed, {84});
    const FlowInstance K = generate::random_flow_instance(rng, fp);
    p.seed = seed;
    const auto classic = oracle::classic_min_cost_flow(K);
    const auto r = min_cost_flow(K, p);
    CAPTURE(seed);
    REQUIRE(static_cast<bool>(classic) == static_cast<bool>(r));
    if (!r) continue;
    ++feasible;
    CHECK(r->cost == classic->cost);
    CHECK(validate_flow(K, r->flow));
    CHECK(oracle::residual_has_no_negative_cycle(K, r->flow.amount));
  }
  CHECK(feasible > 15);
}
