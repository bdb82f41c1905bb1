#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smallflow/extraction.hpp"
#include "smallflow/network.hpp"

// Minimum-cost integral flow of value k through the vertex-disjoint paths
// gadget K*.
namespace smallflow::flow {

// Capacities above k never matter for a value-k flow.
FlowInstance clamp_capacities(const FlowInstance& K);

enum class GadgetRole { kUnit, kTransport, kConnector };

struct GadgetEdge {
  GadgetRole role;
  Vertex vertex = -1;  // original vertex of a unit edge
  int arc = -1;        // original arc of a transport edge
  int unit = -1;       // copy index of a transport edge, 0-based
};

// Unit vertex of K*: copy `unit` of `arc` entering (kIn) or leaving (kOut)
// original vertex `vertex`.
struct UnitVertex {
  Vertex vertex;
  bool out;
  int arc;
  int unit;
};

struct GadgetNetwork {
  PathInstance network;
  std::vector<GadgetEdge> backmap;  // gadget edge id -> origin
  std::vector<UnitVertex> units;    // gadget vertex id -> origin, terminals excluded
  Cost scale = 1;                   // M = k n + 1
  int arcs = 0;                     // arc count of the clamped instance
};

// K must have capacities at most k (see clamp_capacities).
GadgetNetwork build_gadget_network(const FlowInstance& K);

Cost extract_cost(Cost gadget_cost, Cost scale);

struct Flow {
  std::vector<std::int64_t> amount;  // per arc
  std::int64_t value = 0;
  Cost cost = 0;
};

// Counts transport edges per arc. Throws InstanceError if a path uses an
// edge id outside the gadget.
Flow recover_flow(const PathSet& paths, const GadgetNetwork& g, const FlowInstance& K);

// Empty when f is a feasible flow of value k; otherwise names the first
// violated constraint.
std::optional<std::string> flow_violation(const FlowInstance& K, const Flow& f);
inline bool validate_flow(const FlowInstance& K, const Flow& f) { return !flow_violation(K, f); }

struct FlowResult {
  Cost cost = 0;
  Flow flow;
  ExtractionReport report;  // extraction on K*
};

// clamp -> K* -> disjoint paths -> flow. Absent iff no flow of value k exists
// (up to the one-sided error of the tests); throws ExtractionError when the
// retries run out.
std::optional<FlowResult> min_cost_flow(const FlowInstance& K, const TestParams& params,
                                        const ExtractOptions& options = {});

}  // namespace smallflow::flow
