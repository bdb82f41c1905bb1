#include <doctest.h>

#include <numeric>

#include "fixtures.hpp"
#include "smallflow/evaluator.hpp"
#include "smallflow/generate.hpp"
#include "smallflow/oracle.hpp"

using namespace smallflow;
using oracle::BoundMode;

namespace {

PathInstance without_edge(const PathInstance& g, EdgeId drop) {
  std::vector<Edge> edges;
  std::vector<Cost> costs;
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (e == drop) continue;
    edges.push_back(g.edge(e));
    costs.push_back(g.cost(e));
  }
  return PathInstance(g.n(), edges, g.sources(), g.sinks(), costs);
}

Assignment drop_value(const Assignment& f, EdgeId drop) {
  Assignment out;
  for (EdgeId e = 0; e < static_cast<EdgeId>(f.size()); ++e) {
    if (e != drop) out.push_back(f[e]);
  }
  return out;
}

}  // namespace

TEST_CASE("length evaluation on the fixtures") {
  const Field field;
  const std::uint64_t a = 0x0123456789ABCDEFULL;
  CHECK(eval_length_bounded_seq(fixtures::single_edge(), 1, {a}, field).bits == a);
  CHECK(eval_length_bounded_par(fixtures::single_edge(), 1, {a}, field).bits == a);
  // Two monomials evaluating to 1 cancel.
  CHECK(eval_length_bounded_seq(fixtures::direct_and_detour(), 2, {1, 1, 1}, field).is_zero());
  // With l = 1 only the direct edge counts.
  CHECK(eval_length_bounded_seq(fixtures::direct_and_detour(), 1, {5, 1, 1}, field).bits == 5);
  // x11 x22 + x12 x21 at x11 = g, rest 1 gives g + 1.
  const std::uint64_t g = 0xDEADBEEFULL;
  CHECK(eval_length_bounded_seq(fixtures::bipartite_2x2(), 2, {g, 1, 1, 1}, field).bits == (g ^ 1));
  CHECK(eval_length_bounded_par(fixtures::bipartite_2x2(), 2, {g, 1, 1, 1}, field).bits == (g ^ 1));
  CHECK(eval_length_bounded_seq(fixtures::shared_bottleneck(), 4, {3, 5, 7, 11}, field).is_zero());
}

TEST_CASE("length evaluation rejects bad arguments") {
  const Field field;
  const auto b = fixtures::bipartite_2x2();
  CHECK_THROWS_AS(eval_length_bounded_seq(b, 0, {1, 1, 1, 1}, field), DomainError);
  CHECK_THROWS_AS(eval_length_bounded_seq(b, 7, {1, 1, 1, 1}, field), DomainError);
  CHECK_THROWS_AS(eval_length_bounded_par(b, 7, {1, 1, 1, 1}, field), DomainError);
  CHECK_THROWS_AS(eval_length_bounded_seq(b, 2, {1, 1, 1}, field), DomainError);
  const Field small(gf2::FieldSpec::standard(8));
  CHECK_THROWS_AS(eval_length_bounded_seq(b, 2, {1, 1, 1, 256}, small), DomainError);
}

TEST_CASE("doubling evaluator is bit-identical to the sequential one") {
  const Field field;
  auto rng = make_rng(99);
  generate::PathParams p;
  p.n_max = 12;
  for (int it = 0; it < 150; ++it) {
    const auto g = generate::random_path_instance(rng, p);
    const int l = std::uniform_int_distribution<int>(g.k(), g.max_total_length())(rng);
    for (int rep = 0; rep < 3; ++rep) {
      const auto f = random_assignment(field, g.m(), rng);
      const auto seq = eval_length_bounded_seq(g, l, f, field);
      for (int threads : {1, 2, 4}) {
        REQUIRE(eval_length_bounded_par(g, l, f, field, {threads}) == seq);
      }
    }
  }
}

TEST_CASE("doubling evaluator respects the memory ceiling") {
  const Field field;
  auto rng = make_rng(3);
  const auto g = generate::layered_instance(rng, 40, 3, 3);
  const Assignment f(g.m(), 1);
  EvalOptions tight;
  tight.memory_ceiling = 1024;
  CHECK_THROWS_AS(eval_length_bounded_par(g, g.max_total_length(), f, field, tight), BudgetError);
}

TEST_CASE("cost slices on the costed 2x2 instance") {
  const Field field;
  const auto g = fixtures::bipartite_2x2(true);
  auto rng = make_rng(17);
  const auto f = random_assignment(field, g.m(), rng);
  const auto s = eval_cost_slices(g, 6, f, field);
  REQUIRE(s.values.size() == 7);
  for (std::size_t p = 0; p <= 6; ++p) {
    std::uint64_t want = 0;
    if (p == 2) want = field.mul_raw(f[0], f[3]);
    if (p == 4) want = field.mul_raw(f[1], f[2]);
    CHECK(s.values[p] == want);
  }
  CHECK(s.first_nonzero() == std::optional<std::size_t>(2));
  CHECK(s.cumulative(3).bits == s.values[2]);

  const auto cut = eval_with_edge_removed(g, 0, 6, f, field);
  for (std::size_t p = 0; p <= 6; ++p) {
    if (p != 4) CHECK(cut.values[p] == 0);
  }
  CHECK(cut.values[4] == s.values[4]);

  CostEvalOptions early;
  early.stop_at_first_nonzero = true;
  const auto stopped = eval_cost_slices(g, 6, f, field, early);
  CHECK(stopped.values.size() == 3);
  CHECK(stopped.values[2] == s.values[2]);
}

TEST_CASE("cost slices edge cases") {
  const Field field;
  const PathInstance empty(4, {}, {0, 1}, {2, 3}, std::vector<Cost>{});
  const auto s = eval_cost_slices(empty, 10, {}, field);
  CHECK_FALSE(s.first_nonzero().has_value());

  const auto single = fixtures::single_edge(3);
  CHECK(eval_cost_slices(single, 5, {9}, field).first_nonzero() == std::optional<std::size_t>(3));
  CHECK_FALSE(eval_with_edge_removed(single, 0, 5, {9}, field).first_nonzero().has_value());
  CHECK_THROWS_AS(eval_with_edge_removed(single, 1, 5, {9}, field), DomainError);
  CHECK_THROWS_AS(eval_cost_slices(fixtures::bipartite_2x2(true), 1, {1, 1, 1, 1}, field), DomainError);
  CostEvalOptions tight;
  tight.memory_ceiling = 64;
  CHECK_THROWS_AS(eval_cost_slices(single, 5, {9}, field, tight), BudgetError);
}

TEST_CASE("unit costs reproduce the length slices") {
  const Field field;
  auto rng = make_rng(1001);
  generate::PathParams p;
  p.n_max = 9;
  for (int it = 0; it < 100; ++it) {
    const auto g = generate::random_path_instance(rng, p);
    const auto f = random_assignment(field, g.m(), rng);
    const int l = g.max_total_length();
    const auto by_length = eval_length_slices(g, l, f, field);
    const auto by_cost = eval_cost_slices(g, l, f, field, {});
    REQUIRE(by_length.values == by_cost.values);
  }
}

TEST_CASE("subdivision construction") {
  const auto one = fixtures::single_edge(1);
  const auto s1 = subdivide_costs(one);
  CHECK(s1.instance.n() == 2);
  CHECK(s1.instance.m() == 1);
  CHECK(s1.carry == std::vector<EdgeId>{0});

  const auto three = fixtures::single_edge(3);
  const auto s3 = subdivide_costs(three);
  CHECK(s3.instance.n() == 4);
  CHECK(s3.instance.m() == 3);
  CHECK(s3.carry == std::vector<EdgeId>{0});
  CHECK(carry_assignment(s3, {42}) == Assignment{42, 1, 1});

  auto rng = make_rng(4);
  generate::PathParams p;
  p.max_cost = 4;
  for (int it = 0; it < 50; ++it) {
    const auto g = generate::random_path_instance(rng, p);
    const Cost total = std::accumulate(g.costs().begin(), g.costs().end(), Cost{0});
    const auto s = subdivide_costs(g);
    REQUIRE(s.instance.n() == g.n() + (total - g.m()));
    REQUIRE(s.instance.m() == total);
  }
}

TEST_CASE("implicit subdivision matches explicit subdivision slice by slice") {
  const Field field;
  auto rng = make_rng(606);
  generate::PathParams p;
  p.n_max = 7;
  p.max_cost = 4;
  int checked = 0;
  while (checked < 60) {
    const auto g = generate::random_path_instance(rng, p);
    const Cost total = std::accumulate(g.costs().begin(), g.costs().end(), Cost{0});
    if (total > 40) continue;
    ++checked;
    const auto s = subdivide_costs(g);
    const auto f = random_assignment(field, g.m(), rng);
    const int bound = std::min<int>(static_cast<int>(total) + 1, s.instance.max_total_length());
    if (bound < g.k()) continue;
    const auto implicit = eval_cost_slices(g, bound, f, field);
    const auto explicit_ = eval_length_slices(s.instance, bound, carry_assignment(s, f), field);
    REQUIRE(implicit.values == explicit_.values);
  }
}

TEST_CASE("every slice equals the symbolic oracle over GF(2^8)") {
  const Field field(gf2::FieldSpec::standard(8));
  auto rng = make_rng(2718);
  generate::PathParams p;
  p.n_max = 6;
  for (int it = 0; it < 40; ++it) {
    const bool costed = it % 2;
    p.max_cost = costed ? 3 : 0;
    const auto g = generate::random_path_instance(rng, p);
    const int bound = costed ? 2 * g.max_total_length() : g.max_total_length();
    const auto poly = oracle::symbolic_slices(
        g, {costed ? BoundMode::kCostExactly : BoundMode::kLengthAtMost, bound});
    for (int seed = 0; seed < 50; ++seed) {
      auto frng = make_rng(seed, {static_cast<std::uint64_t>(it)});
      const auto f = random_assignment(field, g.m(), frng);
      const auto slices = costed ? eval_cost_slices(g, bound, f, field)
                                 : eval_length_slices(g, bound, f, field);
      for (int q = 0; q <= bound; ++q) {
        REQUIRE(slices.at(q) == poly[q].evaluate(f, field));
      }
    }
  }
}

TEST_CASE("edge removal equals evaluation on the smaller instance") {
  const Field field;
  auto rng = make_rng(8080);
  generate::PathParams p;
  p.max_cost = 3;
  for (int it = 0; it < 40; ++it) {
    const auto g = generate::random_path_instance(rng, p);
    if (g.m() == 0) continue;
    const auto f = random_assignment(field, g.m(), rng);
    const EdgeId e = std::uniform_int_distribution<EdgeId>(0, g.m() - 1)(rng);
    const std::int64_t U = 3 * g.n();
    const auto cut = eval_with_edge_removed(g, e, U, f, field);
    const auto smaller = eval_cost_slices(without_edge(g, e), U, drop_value(f, e), field);
    REQUIRE(cut.values == smaller.values);
  }
}

TEST_CASE("adding edges never removes a monomial") {
  auto rng = make_rng(55);
  generate::PathParams p;
  p.n_max = 6;
  for (int it = 0; it < 40; ++it) {
    const auto big = generate::random_path_instance(rng, p);
    if (big.m() == 0) continue;
    const EdgeId e = std::uniform_int_distribution<EdgeId>(0, big.m() - 1)(rng);
    const auto small = without_edge(big, e);
    const int l = big.max_total_length();
    const auto ps = oracle::symbolic_slices(small, {BoundMode::kLengthAtMost, l});
    const auto pb = oracle::symbolic_slices(big, {BoundMode::kLengthAtMost, l});
    for (int q = 0; q <= l; ++q) {
      for (auto mono : ps[q].terms()) {
        // Edge ids above e shift down by one in the smaller instance.
        for (auto& id : mono) id += id >= e;
        REQUIRE(pb[q].terms().count(mono) == 1);
      }
    }
  }
}

TEST_CASE("evaluation stats count subset cells") {
  const Field field;
  auto rng = make_rng(12);
  for (int k = 1; k <= 4; ++k) {
    const auto g = generate::layered_instance(rng, 24, k, 3);
    EvalStats stats;
    const Assignment f(g.m(), 1);
    const int l = 12;
    eval_length_bounded_seq(g, l, f, field, &stats);
    CHECK(stats.subset_cells == (std::uint64_t{1} << k) * (l + 1));
  }
}

TEST_CASE("length bounds below k admit no walk set") {
  const Field field;
  const auto b = fixtures::bipartite_2x2();
  CHECK(eval_length_bounded_seq(b, 1, {1, 1, 1, 1}, field).is_zero());
  CHECK(eval_length_bounded_par(b, 1, {1, 1, 1, 1}, field, {}).is_zero());
}
