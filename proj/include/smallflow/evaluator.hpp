#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "smallflow/errors.hpp"
#include "smallflow/gf2/field.hpp"
#include "smallflow/network.hpp"

namespace smallflow {

using gf2::Field;
using gf2::FieldElement;

// Field value of x_e for every edge id e, as raw words below 2^s.
using Assignment = std::vector<std::uint64_t>;

template <class Rng>
Assignment random_assignment(const Field& field, int m, Rng& rng) {
  Assignment f(m);
  for (auto& v : f) v = field.random_element(rng).bits;
  return f;
}

// Throws DomainError unless f has one reduced value per edge.
void check_assignment(const PathInstance& g, const Field& field, const Assignment& f);

struct EvalOptions {
  int parallelism = 1;  // threads; 0 means the OpenMP default
  std::size_t memory_ceiling = kDefaultMemoryCeiling;
};

struct EvalStats {
  std::uint64_t pair_cells = 0;    // pair-table entries computed
  std::uint64_t subset_cells = 0;  // 2^k * (bound + 1)
  std::size_t table_bytes = 0;
};

// Value of the exact-total slice p of the walk-set polynomial, indexed by p.
struct CostSlices {
  std::vector<std::uint64_t> values;

  FieldElement at(std::size_t p) const {
    return {p < values.size() ? values[p] : 0};
  }
  // Sum of slices 0..u, i.e. the polynomial with total bound u.
  FieldElement cumulative(std::size_t u) const;
  std::optional<std::size_t> first_nonzero() const;
};

// Q_p(Y) for p = 0..l: sum over proper walk sets of total length exactly p.
// Sequential pair recurrence over lengths, then the subset recurrence.
CostSlices eval_length_slices(const PathInstance& g, int l, const Assignment& f,
                              const Field& field, EvalStats* stats = nullptr);

// Q_{L,l}(f).
FieldElement eval_length_bounded_seq(const PathInstance& g, int l,
                                     const Assignment& f, const Field& field,
                                     EvalStats* stats = nullptr);

// Same value via the doubling pair recurrence over all start vertices outside
// Y, rounds parallel over (length, row) and subset layers parallel over B.
// Bit-identical to the sequential evaluator for every parallelism degree.
FieldElement eval_length_bounded_par(const PathInstance& g, int l,
                                     const Assignment& f, const Field& field,
                                     const EvalOptions& options = {},
                                     EvalStats* stats = nullptr);

struct CostEvalOptions : EvalOptions {
  // Stop after the first nonzero slice; later slices are left out.
  bool stop_at_first_nonzero = false;
};

// Slices 0..u_max of the cost polynomial, via the cost-indexed pair
// recurrence (edges of cost c jump c layers) and the subset recurrence.
// Throws DomainError if u_max < k, BudgetError if the tables exceed the
// memory ceiling.
CostSlices eval_cost_slices(const PathInstance& g, std::int64_t u_max,
                            const Assignment& f, const Field& field,
                            const CostEvalOptions& options = {},
                            EvalStats* stats = nullptr);

// Slices of the polynomial of g with edge `removed` deleted. Setting x_e = 0
// deletes exactly the monomials containing x_e, so this evaluates the full
// polynomial at f with that coordinate zeroed.
CostSlices eval_with_edge_removed(const PathInstance& g, EdgeId removed,
                                  std::int64_t u_max, const Assignment& f,
                                  const Field& field,
                                  const CostEvalOptions& options = {});

// Bytes eval_cost_slices would allocate.
std::size_t cost_table_bytes(const PathInstance& g, std::int64_t u_max);

// Explicit subdivision: an edge of cost c becomes a path of c unit edges
// through c-1 fresh inner vertices. carry[e] is the id of the first edge of
// the replacement path of e.
struct Subdivision {
  PathInstance instance;
  std::vector<EdgeId> carry;
};

Subdivision subdivide_costs(const PathInstance& g);

// Original values on the carried edges, 1 on every other new edge.
Assignment carry_assignment(const Subdivision& s, const Assignment& f);

}  // namespace smallflow
