#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "smallflow/errors.hpp"
#include "smallflow/evaluator.hpp"
#include "smallflow/network.hpp"

// Exponential-time ground truth for the randomized pipeline.
namespace smallflow::oracle {

enum class BoundMode {
  kLengthAtMost,  // proper walk sets with total length <= bound
  kCostExactly,   // proper walk sets with total cost == bound (no length cap)
};

struct WalkBound {
  BoundMode mode;
  std::int64_t value;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

// Calls visit once per proper walk set within the bound; walk i starts at
// x_i. Throws BudgetError once more than `budget` walks or sets are produced.
void enumerate_proper_walk_sets(const PathInstance& g, WalkBound bound,
                                const std::function<void(const ProperWalkSet&)>& visit,
                                std::uint64_t budget = kDefaultEnumerationBudget);

std::vector<ProperWalkSet> proper_walk_sets(const PathInstance& g, WalkBound bound,
                                            std::uint64_t budget = kDefaultEnumerationBudget);

// Sorted edge multiset of a walk set.
using Monomial = std::vector<EdgeId>;

Monomial monomial_of(const ProperWalkSet& s);

// Polynomial over GF(2) in the edge variables: a monomial is present iff it
// was toggled an odd number of times.
class SymbolicPolynomial {
 public:
  void toggle(const Monomial& m);
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::set<Monomial>& terms() const { return terms_; }
  FieldElement evaluate(const Assignment& f, const Field& field) const;
  friend bool operator==(const SymbolicPolynomial&, const SymbolicPolynomial&) = default;

 private:
  std::set<Monomial> terms_;
};

SymbolicPolynomial symbolic_char2_polynomial(const PathInstance& g, WalkBound bound,
                                             std::uint64_t budget = kDefaultEnumerationBudget);

// Per exact total: index p holds the polynomial of walk sets with total
// length (kLengthAtMost) or total cost (kCostExactly) equal to p, for every
// p <= bound.value.
std::vector<SymbolicPolynomial> symbolic_slices(const PathInstance& g, WalkBound bound,
                                                std::uint64_t budget = kDefaultEnumerationBudget);

struct Signature {
  int i;        // first walk that meets another walk
  int j;        // partner walk
  int pos_i;    // index of the meeting vertex in walk i's vertex sequence
  int pos_j;    // first index of that vertex in walk j
  Vertex vertex;
  friend bool operator==(const Signature&, const Signature&) = default;
};

// Walk i is the lowest-indexed walk sharing a vertex with another walk;
// pos_i is the earliest position on walk i whose vertex lies on another walk;
// j is the lowest such walk and pos_j the first occurrence there. Undefined
// iff the walks are pairwise vertex-disjoint.
std::optional<Signature> signature(const PathInstance& g, const ProperWalkSet& s);

// Swaps the suffixes of walks i and j after the signature vertex; identity
// when the signature is undefined.
ProperWalkSet apply_phi(const PathInstance& g, const ProperWalkSet& s);

bool walks_simple(const PathInstance& g, const ProperWalkSet& s);

enum class Objective { kLength, kCost };

struct BruteForceResult {
  Cost value;  // total length or total cost
  PathSet paths;
};

inline constexpr int kDefaultBruteForceLimit = 10;

// Exhaustive search over k-tuples of vertex-disjoint simple paths (path i
// from x_i to any unused sink). Returns the optimum with an optional upper
// bound on the objective; among optima, the lexicographically least tuple of
// edge-id sequences. Throws BudgetError when n exceeds vertex_limit.
std::optional<BruteForceResult> brute_force_disjoint_paths(
    const PathInstance& g, Objective objective, std::optional<Cost> bound = std::nullopt,
    int vertex_limit = kDefaultBruteForceLimit);

// Min-cost k vertex-disjoint X-Y paths by min-cost flow on the vertex-split
// graph. Exact, polynomial; used where exhaustive search is too slow.
std::optional<BruteForceResult> disjoint_paths_by_flow(const PathInstance& g);

struct FlowSolution {
  Cost cost;
  std::vector<std::int64_t> flow;  // per arc
};

// Successive shortest paths with Dijkstra on reduced costs. Absent when the
// maximum flow is below k.
std::optional<FlowSolution> classic_min_cost_flow(const FlowInstance& K);

// True when no negative cycle exists in the residual graph of `flow`
// (Bellman-Ford), i.e. the flow is cost-optimal for its value.
bool residual_has_no_negative_cycle(const FlowInstance& K, const std::vector<std::int64_t>& flow);

}  // namespace smallflow::oracle
