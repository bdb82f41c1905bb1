#include "smallflow/decision.hpp"

#include <cmath>
#include <string>

#include "smallflow/rng.hpp"

namespace smallflow {

int TestParams::repetitions_for(int n) const {
  if (repetitions > 0) return repetitions;
  const int log_n = static_cast<int>(std::ceil(std::log2(std::max(2, n))));
  return std::max(3, log_n);
}

CostEvalOptions TestParams::eval_options() const {
  CostEvalOptions o;
  o.parallelism = parallelism;
  o.memory_ceiling = memory_ceiling;
  return o;
}

std::uint64_t repetition_seed(std::uint64_t seed, int rep) {
  return derive_seed(seed, {static_cast<std::uint64_t>(rep)});
}

void check_field_degree(const gf2::FieldSpec& field, std::int64_t degree) {
  if (field.exponent() >= 63) return;
  if (degree >= (std::int64_t{1} << field.exponent())) {
    throw DomainError("GF(2^" + std::to_string(field.exponent()) +
                      ") is too small for polynomials of degree " + std::to_string(degree));
  }
}

namespace {

template <class NonzeroAt>
Verdict run_repetitions(const PathInstance& g, const TestParams& params, const Field& field,
                        NonzeroAt nonzero_at) {
  Verdict v;
  const int t = params.repetitions_for(g.n());
  for (int rep = 0; rep < t; ++rep) {
    Rng rng(repetition_seed(params.seed, rep));
    Assignment f = random_assignment(field, g.m(), rng);
    ++v.repetitions;
    if (nonzero_at(f)) {
      v.answer = Answer::kNonzero;
      v.witness_repetition = rep;
      v.witness = std::move(f);
      break;
    }
  }
  return v;
}

}  // namespace

Verdict decide_disjoint_paths(const PathInstance& g, int l, const TestParams& params) {
  if (l < 1 || l > g.max_total_length()) {
    throw DomainError("length bound " + std::to_string(l) + " outside [1, k(n-1)]");
  }
  check_field_degree(params.field, l);
  const Field field(params.field);
  return run_repetitions(g, params, field, [&](const Assignment& f) {
    if (params.parallelism == 1) return !eval_length_bounded_seq(g, l, f, field).is_zero();
    EvalOptions o;
    o.parallelism = params.parallelism;
    o.memory_ceiling = params.memory_ceiling;
    return !eval_length_bounded_par(g, l, f, field, o).is_zero();
  });
}

Verdict decide_cost_bounded(const PathInstance& g, std::int64_t u, const TestParams& params) {
  if (u < g.k()) throw DomainError("cost bound below k");
  check_field_degree(params.field, u);
  const Field field(params.field);
  CostEvalOptions o = params.eval_options();
  o.stop_at_first_nonzero = true;
  return run_repetitions(g, params, field, [&](const Assignment& f) {
    return eval_cost_slices(g, u, f, field, o).first_nonzero().has_value();
  });
}

std::int64_t default_cost_ceiling(const PathInstance& g) {
  return std::max<std::int64_t>(g.max_cost() * g.n() * g.n(), g.k());
}

std::int64_t disjoint_cost_upper_bound(const PathInstance& g) {
  std::int64_t total = 0;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (g.role(v) == Role::kSink) continue;
    Cost dearest = 0;
    for (EdgeId e : g.out_edges(v)) {
      if (g.role(g.edge(e).to) != Role::kSource) dearest = std::max(dearest, g.cost(e));
    }
    total += dearest;
  }
  return total;
}

MinCostAnswer min_cost_disjoint_paths(const PathInstance& g, std::optional<std::int64_t> u_max,
                                      const TestParams& params) {
  const std::int64_t ceiling = u_max.value_or(default_cost_ceiling(g));
  if (ceiling < g.k()) throw DomainError("cost ceiling below k");
  MinCostAnswer out;
  std::int64_t limit = std::min(ceiling, disjoint_cost_upper_bound(g));
  if (limit < g.k()) return out;
  check_field_degree(params.field, limit);
  const Field field(params.field);
  CostEvalOptions o = params.eval_options();
  o.stop_at_first_nonzero = true;
  const int t = params.repetitions_for(g.n());
  for (int rep = 0; rep < t; ++rep) {
    Rng rng(repetition_seed(params.seed, rep));
    const Assignment f = random_assignment(field, g.m(), rng);
    ++out.repetitions;
    const auto first = eval_cost_slices(g, limit, f, field, o).first_nonzero();
    if (first) {
      out.cost = static_cast<std::int64_t>(*first);
      limit = *out.cost;
      // Nothing can undercut k, the least total cost of k walks.
      if (limit == g.k()) break;
    }
  }
  return out;
}

}  // namespace smallflow
