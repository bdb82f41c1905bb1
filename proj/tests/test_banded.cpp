#include <doctest.h>

#include "fixtures.hpp"
#include "smallflow/banded.hpp"
#include "smallflow/generate.hpp"
#include "smallflow/oracle.hpp"

using namespace smallflow;
using Slice = BandedEvaluator::Slice;

namespace {

// Costs c(e) R + w(e) as an ordinary costed instance.
PathInstance flatten(const PathInstance& g, const std::vector<Cost>& minor, Cost R) {
  std::vector<Cost> c(g.m());
  for (EdgeId e = 0; e < g.m(); ++e) c[e] = g.cost(e) * R + minor[e];
  return g.with_costs(c);
}

std::vector<Cost> random_minor(Rng& rng, int m, Cost r) {
  std::uniform_int_distribution<Cost> pick(1, r);
  std::vector<Cost> w(m);
  for (auto& x : w) x = pick(rng);
  return w;
}

// d/dx_e of a char-2 polynomial: monomials with x_e to an odd power.
std::uint64_t derivative(const oracle::SymbolicPolynomial& p, EdgeId e, const Assignment& f,
                         const Field& field) {
  std::uint64_t acc = 0;
  for (const auto& mono : p.terms()) {
    const auto count = std::count(mono.begin(), mono.end(), e);
    if (count % 2 == 0) continue;
    std::uint64_t term = 1;
    bool skipped = false;
    for (EdgeId x : mono) {
      if (x == e && !skipped) {
        skipped = true;
        continue;
      }
      term = field.mul_raw(term, f[x]);
    }
    acc ^= term;
  }
  return acc;
}

}  // namespace

TEST_CASE("zero minor weights reproduce the cost slices") {
  const Field field;
  generate::PathParams gp;
  gp.max_cost = 4;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto rng = make_rng(seed, {51});
    const PathInstance g = generate::random_path_instance(rng, gp);
    const Assignment f = random_assignment(field, g.m(), rng);
    const Cost D = 3 * g.k() + 6;
    const CostSlices ref = eval_cost_slices(g, D, f, field, {});
    BandedEvaluator ev(g, std::vector<Cost>(g.m(), 0), field);
    const auto& full = ev.forward(f, D, 0);
    CAPTURE(seed);
    for (Cost d = 0; d <= D; ++d) CHECK(full[d][0] == ref.at(d).bits);
  }
}

TEST_CASE("two-level slices equal the flattened one-dimensional slices") {
  const Field field;
  generate::PathParams gp;
  gp.max_cost = 3;
  gp.n_max = 7;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto rng = make_rng(seed, {52});
    const PathInstance g = generate::random_path_instance(rng, gp);
    const Cost r = 5;
    const Cost D = 2 * g.k() + 4;
    // Minor totals of walk sets with major <= D stay below D r < R.
    const Cost R = D * r + 1;
    const auto minor = random_minor(rng, g.m(), r);
    const Assignment f = random_assignment(field, g.m(), rng);
    const CostSlices ref = eval_cost_slices(flatten(g, minor, R), D * R + R - 1, f, field, {});
    BandedEvaluator ev(g, minor, field);
    const auto& full = ev.forward(f, D, R - 1);
    CAPTURE(seed);
    for (Cost d = 0; d <= D; ++d) {
      for (Cost w = 0; w < R; ++w) CHECK(full[d][w] == ref.at(d * R + w).bits);
    }
    const auto first = ev.first_nonzero();
    const auto ref_first = ref.first_nonzero();
    REQUIRE(static_cast<bool>(first) == static_cast<bool>(ref_first));
    if (first) CHECK(first->major * R + first->minor == Cost(*ref_first));
  }
}

TEST_CASE("pruning does not change slices within the major limit") {
  const Field field;
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const PathInstance g = generate::layered_instance(rng, 14, 3, 3, 5);
    const auto minor = random_minor(rng, g.m(), 9);
    const Assignment f = random_assignment(field, g.m(), rng);
    BandedEvaluator wide(g, minor, field), narrow(g, minor, field);
    const auto big = wide.forward(f, 40, 120);
    const auto& small = narrow.forward(f, 25, 120);
    for (Cost d = 0; d <= 25; ++d) CHECK(small[d] == big[d]);
    CHECK(narrow.live_states() <= wide.live_states());
  }
}

TEST_CASE("gradient matches the symbolic derivative") {
  const Field field;
  generate::PathParams gp;
  gp.max_cost = 3;
  gp.n_max = 6;
  int checked = 0, nonzero = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto rng = make_rng(seed, {53});
    const PathInstance g = generate::random_path_instance(rng, gp);
    const Cost r = 4;
    const Cost D = 2 * g.k() + 3;
    const Cost R = D * r + 1;
    const auto minor = random_minor(rng, g.m(), r);
    const Assignment f = random_assignment(field, g.m(), rng);
    const PathInstance flat = flatten(g, minor, R);
    const auto slices =
        oracle::symbolic_slices(flat, {oracle::BoundMode::kCostExactly, D * R + R - 1});
    BandedEvaluator ev(g, minor, field, {.parallelism = 2});
    ev.forward(f, D, R - 1);
    CAPTURE(seed);
    // The least nonzero slice and a few others, zero or not.
    std::vector<Slice> targets = {{D, R - 1}, {D / 2, 3}};
    if (auto first = ev.first_nonzero()) targets.push_back(*first);
    for (const Slice s : targets) {
      const auto& poly = slices[s.major * R + s.minor];
      CHECK(ev.value(s) == poly.evaluate(f, field).bits);
      const auto grad = ev.gradient(s);
      for (EdgeId e = 0; e < g.m(); ++e) {
        CHECK(grad[e] == derivative(poly, e, f, field));
        nonzero += grad[e] != 0;
      }
      ++checked;
    }
  }
  CHECK(checked >= 400);
  CHECK(nonzero > 100);
}

TEST_CASE("two-level tables respect the memory ceiling") {
  const Field field;
  Rng rng(3);
  const PathInstance g = generate::layered_instance(rng, 20, 3, 3, 5);
  BandedEvaluator ev(g, random_minor(rng, g.m(), 100), field, {.memory_ceiling = 1 << 16});
  CHECK_THROWS_AS(ev.forward(random_assignment(field, g.m(), rng), 60, 5000), BudgetError);
}
