#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "smallflow/evaluator.hpp"

namespace smallflow {

// Walk-set polynomial under two-level costs: every edge carries a major cost
// (the instance's own) and a minor weight, and slices are indexed by
// (total major, total minor). With perturbed costs c(e) R + w(e) and minor
// totals below R, slice (d, w) is the one-dimensional slice d R + w, and the
// least nonzero pair in lexicographic order is the least nonzero slice.
//
// Walks are built sink by sink: R(d, B, z) holds the partial walk sets whose
// first |B| walks end in the sinks B and whose walk from x_{|B|+1} stands at z,
// and S(d, B) the completed ones. States that cannot finish within the major
// limit (by a shortest-path lower bound) are skipped. All states are kept so a
// reverse pass can differentiate one slice with respect to every edge.
class BandedEvaluator {
 public:
  BandedEvaluator(const PathInstance& g, std::vector<Cost> minor, const Field& field,
                  EvalOptions options = {});

  struct Slice {
    Cost major;
    Cost minor;
    friend auto operator<=>(const Slice&, const Slice&) = default;
  };

  // Slices (d, w) of the full sink set for d <= major_limit, w <= minor_limit;
  // result[d][w].
  const std::vector<std::vector<std::uint64_t>>& forward(const Assignment& f, Cost major_limit,
                                                         Cost minor_limit);
  std::optional<Slice> first_nonzero() const;
  std::uint64_t value(Slice s) const;

  // Partial derivatives of slice s with respect to every x_e at the last
  // forward assignment. s must lie within the forward limits.
  std::vector<std::uint64_t> gradient(Slice s) const;

  std::uint64_t live_states() const { return live_states_; }
  std::size_t peak_bytes() const { return peak_bytes_; }

 private:
  using Vec = std::vector<std::uint64_t>;

  std::size_t r_index(Cost d, unsigned b, Vertex z) const {
    return (std::size_t(d) * subsets_ + b) * n_ + z;
  }
  std::size_t s_index(Cost d, unsigned b) const { return std::size_t(d) * subsets_ + b; }
  bool r_feasible(Cost d, unsigned b, Vertex z) const;
  bool s_feasible(Cost d, unsigned b) const;
  void charge(std::size_t words) const;

  const PathInstance& g_;
  std::vector<Cost> minor_;
  Field field_;
  EvalOptions options_;
  int n_, k_;
  unsigned subsets_;
  static constexpr Cost kFar = Cost{1} << 60;
  std::vector<Cost> to_sink_;      // [b * n + z] least major cost from z to a sink outside b
  std::vector<Cost> rest_;         // [i] lower bound for walks i..k-1
  std::vector<Vertex> targets_;    // inner vertices and sinks

  Assignment f_;
  Cost major_limit_ = -1, minor_limit_ = -1;
  std::vector<Vec> r_, s_;
  std::vector<std::vector<std::uint64_t>> full_;
  std::uint64_t live_states_ = 0;
  mutable std::size_t bytes_ = 0, peak_bytes_ = 0;
};

}  // namespace smallflow
