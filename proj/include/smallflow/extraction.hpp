#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "smallflow/decision.hpp"
#include "smallflow/network.hpp"
#include "smallflow/rng.hpp"

namespace smallflow {

// c'(e) = c(e) r m + w(e) with w(e) uniform on [1, r].
struct PerturbedCosts {
  Cost r = 1;
  int m = 0;
  std::vector<Cost> weights;
  std::vector<Cost> perturbed;

  Cost scale() const { return r * m; }
};

// max(64, 4m): small enough for the two-level tables, with retries covering
// the weaker uniqueness guarantee 1 - m/r >= 3/4.
Cost desk_isolation_range(const PathInstance& g);
// n^2 m.
Cost full_isolation_range(const PathInstance& g);

// Throws DomainError if r < 1 or a perturbed cost overflows.
PerturbedCosts perturb_costs(const PathInstance& g, Cost r, Rng& rng);

// Least perturbed cost D R + W of a disjoint path set, kept as the pair
// (D, W) since W may reach R when every edge is used at weight r.
struct PerturbedOptimum {
  Cost major = 0;
  Cost minor = 0;
  Cost total(const PerturbedCosts& pc) const { return major * pc.scale() + minor; }
  friend bool operator==(const PerturbedOptimum&, const PerturbedOptimum&) = default;
};

// Searches majors up to `major_limit` (default: the unperturbed optimum from
// min_cost_disjoint_paths) and minors up to r (n - k), doubling the minor
// window until some repetition finds a nonzero slice.
std::optional<PerturbedOptimum> find_min_perturbed_cost(const PathInstance& g,
                                                        const PerturbedCosts& pc,
                                                        const TestParams& params,
                                                        std::optional<Cost> major_limit = {});

enum class ClassifyMode {
  kPerEdge,   // one evaluation per edge and repetition with x_e = 0
  kGradient,  // slice value minus x_e times its derivative, one reverse pass
  kAuto,      // per edge up to 64 edges, gradient above
};

// essential[e] is true when every repetition finds all slices up to the
// optimum zero with x_e = 0.
std::vector<bool> classify_edges(const PathInstance& g, const PerturbedCosts& pc,
                                 const PerturbedOptimum& opt, const TestParams& params,
                                 ClassifyMode mode = ClassifyMode::kAuto);

enum class AssemblyFailure {
  kDegree,
  kTerminalReuse,
  kWrongPathCount,
  kStrayEdges,
  kCostMismatch,
};
std::string to_string(AssemblyFailure f);

struct Assembly {
  std::optional<PathSet> paths;
  std::optional<AssemblyFailure> failure;
  std::string detail;
};

Assembly assemble_paths(const PathInstance& g, const std::vector<bool>& essential,
                        const PerturbedCosts& pc, const PerturbedOptimum& opt);

struct ExtractOptions {
  Cost r = 0;  // 0 selects desk_isolation_range
  int max_retries = 3;
  ClassifyMode mode = ClassifyMode::kAuto;
};

struct AttemptLog {
  std::uint64_t seed = 0;
  std::optional<PerturbedOptimum> optimum;
  bool success = false;
  std::string outcome;
};

struct ExtractionReport {
  std::optional<PathSet> paths;
  std::optional<Cost> min_cost;  // unperturbed optimum, absent if infeasible
  Cost r = 0;
  std::vector<AttemptLog> attempts;
  bool exhausted = false;
};

class ExtractionError : public std::runtime_error {
 public:
  ExtractionError(const std::string& what, ExtractionReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const ExtractionReport& report() const { return report_; }

 private:
  ExtractionReport report_;
};

// Perturb, find the optimum, classify, assemble; retries with fresh seeds.
// Never throws on exhaustion: the report says so.
ExtractionReport extract_disjoint_paths(const PathInstance& g, const TestParams& params,
                                        const ExtractOptions& options = {});

// Absent iff infeasible; throws ExtractionError when retries run out.
std::optional<PathSet> find_disjoint_paths(const PathInstance& g, const TestParams& params,
                                           const ExtractOptions& options = {});

}  // namespace smallflow
