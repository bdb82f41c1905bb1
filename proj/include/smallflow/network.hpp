#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smallflow {

// Vertices and edges are 0-indexed in memory and 1-indexed in every text
// format and report.
using Vertex = int;
using EdgeId = int;
using Cost = std::int64_t;

// Upper limit on a single edge cost; keeps every cost sum far from overflow.
inline constexpr Cost kMaxEdgeCost = Cost{1} << 40;

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class InstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Edge {
  Vertex from;
  Vertex to;
  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class Role : std::uint8_t { kInner, kSource, kSink };

// Directed multigraph with ordered source list X and sink list Y, |X| = |Y| =
// k, disjoint. Every edge has a cost; instances built without costs use 1.
class PathInstance {
 public:
  PathInstance(int vertex_count, std::vector<Edge> edges,
               std::vector<Vertex> sources, std::vector<Vertex> sinks,
               std::optional<std::vector<Cost>> costs = std::nullopt,
               std::optional<int> length_bound = std::nullopt);

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  int k() const { return static_cast<int>(sources_.size()); }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Vertex>& sources() const { return sources_; }
  const std::vector<Vertex>& sinks() const { return sinks_; }

  // True when costs were supplied explicitly.
  bool has_costs() const { return has_costs_; }
  Cost cost(EdgeId e) const { return costs_[e]; }
  const std::vector<Cost>& costs() const { return costs_; }
  Cost max_cost() const { return max_cost_; }
  std::optional<int> length_bound() const { return length_bound_; }
  // k(n-1), the longest total length of a proper walk set.
  int max_total_length() const { return k() * (n_ - 1); }

  Role role(Vertex v) const { return roles_[v]; }
  bool is_terminal(Vertex v) const { return roles_[v] != Role::kInner; }
  // Position of v in X (resp. Y), or -1.
  int source_index(Vertex v) const { return source_pos_[v]; }
  int sink_index(Vertex v) const { return sink_pos_[v]; }

  std::span<const EdgeId> out_edges(Vertex v) const {
    return {out_list_.data() + out_offset_[v],
            out_list_.data() + out_offset_[v + 1]};
  }
  std::span<const EdgeId> in_edges(Vertex v) const {
    return {in_list_.data() + in_offset_[v], in_list_.data() + in_offset_[v + 1]};
  }

  PathInstance with_costs(std::vector<Cost> costs) const;
  PathInstance with_length_bound(std::optional<int> l) const;

  friend bool operator==(const PathInstance& a, const PathInstance& b);

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<Vertex> sources_;
  std::vector<Vertex> sinks_;
  std::vector<Cost> costs_;
  bool has_costs_ = false;
  Cost max_cost_ = 1;
  std::optional<int> length_bound_;
  std::vector<Role> roles_;
  std::vector<int> source_pos_, sink_pos_;
  std::vector<int> out_offset_, in_offset_;
  std::vector<EdgeId> out_list_, in_list_;
};

// Paths-instance text format, 1-indexed, '#' starts a comment:
//   q paths <n> <m> <k>
//   x <v>             k lines, sources in order
//   y <v>             k lines, sinks in order
//   e <u> <v> [cost]  m lines; edge ids follow file order
//   l <bound>         optional length bound
PathInstance parse_paths_instance(std::istream& in);
PathInstance parse_paths_instance(std::string_view text);
// Canonical form: header, sources, sinks, optional bound, edges. Costs are
// written only when the instance has explicit costs.
std::string to_paths_text(const PathInstance& instance);

struct Arc {
  Vertex from;
  Vertex to;
  std::int64_t capacity;
  Cost cost;
  friend bool operator==(const Arc&, const Arc&) = default;
};

struct FlowInstance {
  int n = 0;
  std::vector<Arc> arcs;
  Vertex source = 0;
  Vertex sink = 0;
  int k = 0;

  // Throws InstanceError when an invariant fails.
  void validate() const;
  Cost max_cost() const;
  friend bool operator==(const FlowInstance&, const FlowInstance&) = default;
};

// Extended DIMACS min-cost flow:
//   p min <n> <m>
//   n <s> <k>    and   n <t> <-k>
//   a <u> <v> 0 <cap> <cost>
// 'c' lines are comments.
FlowInstance parse_dimacs_flow(std::istream& in);
FlowInstance parse_dimacs_flow(std::string_view text);
std::string to_dimacs(const FlowInstance& flow);

// A walk from a source: the start vertex and the edge ids in order.
struct Walk {
  Vertex start = 0;
  std::vector<EdgeId> edges;

  int length() const { return static_cast<int>(edges.size()); }
  friend bool operator==(const Walk&, const Walk&) = default;
  friend auto operator<=>(const Walk&, const Walk&) = default;
};

std::vector<Vertex> walk_vertices(const PathInstance& g, const Walk& w);
Vertex walk_end(const PathInstance& g, const Walk& w);
Cost walk_cost(const PathInstance& g, const Walk& w);

// k walks; by convention walk i starts at source x_i.
using ProperWalkSet = std::vector<Walk>;

int total_length(const ProperWalkSet& s);
Cost total_cost(const PathInstance& g, const ProperWalkSet& s);

// Empty when s is a proper walk set of g: k walks, starts a permutation of X,
// ends a permutation of Y, consecutive edges chained, inner vertices outside
// X and Y, total length at most k(n-1). Otherwise the first violation.
std::optional<std::string> walk_set_violation(const PathInstance& g,
                                              const ProperWalkSet& s);
bool validate_walk_set(const PathInstance& g, const ProperWalkSet& s);

// k pairwise vertex-disjoint simple paths connecting X with Y.
struct PathSet {
  std::vector<Walk> paths;  // sorted by start vertex
  Cost cost = 0;            // under the instance's own costs
};

std::optional<std::string> path_set_violation(const PathInstance& g,
                                              const PathSet& p);

}  // namespace smallflow
