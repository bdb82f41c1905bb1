#pragma once

#include <cstdint>
#include <optional>

#include "smallflow/errors.hpp"
#include "smallflow/evaluator.hpp"
#include "smallflow/gf2/field.hpp"

namespace smallflow {

struct TestParams {
  gf2::FieldSpec field = gf2::FieldSpec::standard(64);
  int repetitions = 0;  // 0 selects max(3, ceil(log2 n))
  std::uint64_t seed = 1;
  int parallelism = 1;
  std::size_t memory_ceiling = kDefaultMemoryCeiling;

  int repetitions_for(int n) const;
  CostEvalOptions eval_options() const;
};

// Seed of the assignment used by repetition `rep`.
std::uint64_t repetition_seed(std::uint64_t seed, int rep);

// Throws DomainError unless 2^s exceeds the polynomial degree bound.
void check_field_degree(const gf2::FieldSpec& field, std::int64_t degree);

enum class Answer { kNonzero, kZero };

struct Verdict {
  Answer answer = Answer::kZero;
  int repetitions = 0;  // repetitions actually evaluated
  // First repetition (and its assignment) with a nonzero value.
  std::optional<int> witness_repetition;
  std::optional<Assignment> witness;
};

// NONZERO is certain: some proper set of disjoint paths of total length <= l
// exists. ZERO errs with probability at most (l / 2^s)^t.
Verdict decide_disjoint_paths(const PathInstance& g, int l, const TestParams& params);

// Same with total cost <= u; NONZERO iff some slice <= u evaluated nonzero.
Verdict decide_cost_bounded(const PathInstance& g, std::int64_t u, const TestParams& params);

// C * n^2, an upper bound on the cost of k disjoint simple paths.
std::int64_t default_cost_ceiling(const PathInstance& g);

// Sum over sources and inner vertices of their dearest usable out-edge: each
// such vertex leaves at most once in a disjoint path set. Slices above it are
// zero polynomials.
std::int64_t disjoint_cost_upper_bound(const PathInstance& g);

struct MinCostAnswer {
  std::optional<std::int64_t> cost;
  int repetitions = 0;
};

// Least slice index that evaluates nonzero in some repetition, searching up
// to u_max (default C * n^2, capped by disjoint_cost_upper_bound). Each
// repetition is one early-exit slice pass; later repetitions only search below
// the best index found so far.
MinCostAnswer min_cost_disjoint_paths(const PathInstance& g, std::optional<std::int64_t> u_max,
                                      const TestParams& params);

}  // namespace smallflow
