#include <doctest.h>

#include "fixtures.hpp"
#include "smallflow/decision.hpp"
#include "smallflow/generate.hpp"
#include "smallflow/oracle.hpp"

using namespace smallflow;

TEST_CASE("repetition count defaults to max(3, ceil log2 n)") {
  TestParams p;
  CHECK(p.repetitions_for(2) == 3);
  CHECK(p.repetitions_for(8) == 3);
  CHECK(p.repetitions_for(9) == 4);
  CHECK(p.repetitions_for(60) == 6);
  p.repetitions = 11;
  CHECK(p.repetitions_for(60) == 11);
}

TEST_CASE("field degree check") {
  CHECK_NOTHROW(check_field_degree(gf2::FieldSpec::standard(8), 255));
  CHECK_THROWS_AS(check_field_degree(gf2::FieldSpec::standard(8), 256), DomainError);
  CHECK_NOTHROW(check_field_degree(gf2::FieldSpec::standard(64), std::int64_t{1} << 50));
  CHECK_THROWS_AS(decide_cost_bounded(fixtures::bipartite_2x2(true), 300,
                                      {.field = gf2::FieldSpec::standard(8)}),
                  DomainError);
}

TEST_CASE("decisions on the fixtures") {
  TestParams p;
  CHECK(decide_disjoint_paths(fixtures::single_edge(), 1, p).answer == Answer::kNonzero);
  CHECK(decide_disjoint_paths(fixtures::bipartite_2x2(), 2, p).answer == Answer::kNonzero);
  CHECK(decide_disjoint_paths(fixtures::shared_bottleneck(), 4, p).answer == Answer::kZero);
  CHECK(decide_disjoint_paths(fixtures::disconnected(), fixtures::disconnected().max_total_length(), p)
            .answer == Answer::kZero);
  // Direct edge and detour: one path of length 1 and one of length 2.
  CHECK(decide_disjoint_paths(fixtures::direct_and_detour(), 1, p).answer == Answer::kNonzero);

  const auto b = fixtures::bipartite_2x2(true);
  CHECK(decide_cost_bounded(b, 2, p).answer == Answer::kNonzero);
  CHECK(min_cost_disjoint_paths(b, std::nullopt, p).cost == 2);
  CHECK_FALSE(min_cost_disjoint_paths(fixtures::shared_bottleneck(), std::nullopt, p).cost);
  CHECK_THROWS_AS(decide_disjoint_paths(b, 0, p), DomainError);
}

TEST_CASE("NONZERO verdicts come with a reproducible witness") {
  TestParams p;
  p.seed = 99;
  const auto v = decide_cost_bounded(fixtures::bipartite_2x2(true), 4, p);
  REQUIRE(v.answer == Answer::kNonzero);
  REQUIRE(v.witness);
  Rng rng(repetition_seed(p.seed, *v.witness_repetition));
  CHECK(random_assignment(Field(p.field), 4, rng) == *v.witness);
  const auto again = decide_cost_bounded(fixtures::bipartite_2x2(true), 4, p);
  CHECK(again.witness == v.witness);
}

TEST_CASE("decisions agree with brute force on random instances") {
  generate::PathParams gp;
  gp.max_cost = 5;
  TestParams p;
  int positives = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    auto rng = make_rng(seed, {41});
    const PathInstance g = generate::random_path_instance(rng, gp);
    p.seed = seed;
    const auto best_len = oracle::brute_force_disjoint_paths(g, oracle::Objective::kLength);
    const auto best_cost = oracle::brute_force_disjoint_paths(g, oracle::Objective::kCost);
    CHECK(static_cast<bool>(best_len) == static_cast<bool>(best_cost));
    if (best_len) ++positives;
    CAPTURE(seed);
    for (int l = 1; l <= g.max_total_length(); l += 2) {
      const bool yes = decide_disjoint_paths(g, l, p).answer == Answer::kNonzero;
      // NONZERO must never be wrong; ZERO may be, with negligible odds over GF(2^64).
      CHECK(yes == (best_len && best_len->value <= l));
    }
    const auto mc = min_cost_disjoint_paths(g, std::nullopt, p);
    if (best_cost) {
      CHECK(mc.cost == best_cost->value);
      CHECK(decide_cost_bounded(g, best_cost->value, p).answer == Answer::kNonzero);
      if (best_cost->value > g.k()) {
        CHECK(decide_cost_bounded(g, best_cost->value - 1, p).answer == Answer::kZero);
      }
    } else {
      CHECK_FALSE(mc.cost);
    }
  }
  CHECK(positives > 30);
}

TEST_CASE("min cost agrees with the flow oracle on larger instances") {
  TestParams p;
  p.parallelism = 2;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto rng = make_rng(seed, {42});
    const PathInstance g = generate::layered_instance(rng, 24, 3, 3, 6);
    const auto flow = oracle::disjoint_paths_by_flow(g);
    const auto mc = min_cost_disjoint_paths(g, std::nullopt, p);
    CAPTURE(seed);
    REQUIRE(static_cast<bool>(flow) == static_cast<bool>(mc.cost));
    if (flow) CHECK(*mc.cost == flow->value);
  }
}

TEST_CASE("small fields produce one-sided errors only") {
  // Over GF(2^8) ZERO may be wrong, NONZERO never.
  TestParams p;
  p.field = gf2::FieldSpec::standard(8);
  p.repetitions = 1;
  generate::PathParams gp;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto rng = make_rng(seed, {43});
    const PathInstance g = generate::random_path_instance(rng, gp);
    p.seed = seed;
    const int l = g.max_total_length();
    if (decide_disjoint_paths(g, l, p).answer == Answer::kNonzero) {
      CHECK(oracle::brute_force_disjoint_paths(g, oracle::Objective::kLength, l));
    }
  }
}
