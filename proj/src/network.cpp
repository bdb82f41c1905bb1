#include "smallflow/network.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <set>
#include <sstream>

namespace smallflow {
namespace {

std::string vname(Vertex v) { return std::to_string(v + 1); }

void build_csr(int n, const std::vector<Edge>& edges, bool outgoing,
               std::vector<int>& offset, std::vector<EdgeId>& list) {
  offset.assign(n + 1, 0);
  for (const Edge& e : edges) ++offset[(outgoing ? e.from : e.to) + 1];
  for (int v = 0; v < n; ++v) offset[v + 1] += offset[v];
  list.assign(edges.size(), 0);
  std::vector<int> fill(offset.begin(), offset.end() - 1);
  for (EdgeId id = 0; id < static_cast<EdgeId>(edges.size()); ++id) {
    const Vertex key = outgoing ? edges[id].from : edges[id].to;
    list[fill[key]++] = id;
  }
}

// Whitespace-separated tokens of one line with the comment stripped.
std::vector<std::string_view> tokenize(std::string_view line, char comment) {
  if (const auto pos = line.find(comment); pos != std::string_view::npos) {
    line = line.substr(0, pos);
  }
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::int64_t parse_int(std::string_view tok, int line, const char* what) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("expected integer ") + what + ", got '" +
                               std::string(tok) + "'");
  }
  return value;
}

Vertex parse_vertex(std::string_view tok, int n, int line) {
  const std::int64_t v = parse_int(tok, line, "vertex");
  if (v < 1 || v > n) {
    throw ParseError(line, "vertex index " + std::string(tok) +
                               " out of range [1, " + std::to_string(n) + "]");
  }
  return static_cast<Vertex>(v - 1);
}

void expect_arity(const std::vector<std::string_view>& tok, std::size_t lo,
                  std::size_t hi, int line) {
  if (tok.size() < lo || tok.size() > hi) {
    throw ParseError(line, "malformed '" + std::string(tok[0]) + "' line");
  }
}

}  // namespace

PathInstance::PathInstance(int vertex_count, std::vector<Edge> edges,
                           std::vector<Vertex> sources, std::vector<Vertex> sinks,
                           std::optional<std::vector<Cost>> costs,
                           std::optional<int> length_bound)
    : n_(vertex_count),
      edges_(std::move(edges)),
      sources_(std::move(sources)),
      sinks_(std::move(sinks)),
      length_bound_(length_bound) {
  if (n_ < 2) throw InstanceError("need at least two vertices");
  if (sources_.empty()) throw InstanceError("need k >= 1 terminal pairs");
  if (sources_.size() != sinks_.size()) {
    throw InstanceError("source and sink lists differ in size");
  }
  roles_.assign(n_, Role::kInner);
  source_pos_.assign(n_, -1);
  sink_pos_.assign(n_, -1);
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    const Vertex v = sources_[i];
    if (v < 0 || v >= n_) throw InstanceError("source vertex out of range");
    if (roles_[v] != Role::kInner) throw InstanceError("source " + vname(v) + " listed twice");
    roles_[v] = Role::kSource;
    source_pos_[v] = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < sinks_.size(); ++i) {
    const Vertex v = sinks_[i];
    if (v < 0 || v >= n_) throw InstanceError("sink vertex out of range");
    if (roles_[v] == Role::kSource) throw InstanceError("terminal sets not disjoint");
    if (roles_[v] == Role::kSink) throw InstanceError("sink " + vname(v) + " listed twice");
    roles_[v] = Role::kSink;
    sink_pos_[v] = static_cast<int>(i);
  }
  for (const Edge& e : edges_) {
    if (e.from < 0 || e.from >= n_ || e.to < 0 || e.to >= n_) {
      throw InstanceError("edge endpoint out of range");
    }
    if (e.from == e.to) throw InstanceError("self-loop at vertex " + vname(e.from));
  }
  if (costs) {
    if (costs->size() != edges_.size()) {
      throw InstanceError("cost list length differs from edge count");
    }
    for (Cost c : *costs) {
      if (c < 1) throw InstanceError("cost below 1");
      if (c > kMaxEdgeCost) throw InstanceError("cost above " + std::to_string(kMaxEdgeCost));
    }
    costs_ = std::move(*costs);
    // An edgeless instance has nothing to carry a cost.
    has_costs_ = !edges_.empty();
  } else {
    costs_.assign(edges_.size(), 1);
  }
  max_cost_ = costs_.empty() ? 1 : *std::max_element(costs_.begin(), costs_.end());
  if (length_bound_ && (*length_bound_ < 1 || *length_bound_ > max_total_length())) {
    throw InstanceError("length bound must lie in [1, k(n-1)] = [1, " +
                        std::to_string(max_total_length()) + "]");
  }
  build_csr(n_, edges_, true, out_offset_, out_list_);
  build_csr(n_, edges_, false, in_offset_, in_list_);
}

PathInstance PathInstance::with_costs(std::vector<Cost> costs) const {
  return PathInstance(n_, edges_, sources_, sinks_, std::move(costs), length_bound_);
}

PathInstance PathInstance::with_length_bound(std::optional<int> l) const {
  return PathInstance(n_, edges_, sources_, sinks_,
                      has_costs_ ? std::optional(costs_) : std::nullopt, l);
}

bool operator==(const PathInstance& a, const PathInstance& b) {
  return a.n_ == b.n_ && a.edges_ == b.edges_ && a.sources_ == b.sources_ &&
         a.sinks_ == b.sinks_ && a.costs_ == b.costs_ &&
         a.has_costs_ == b.has_costs_ && a.length_bound_ == b.length_bound_;
}

PathInstance parse_paths_instance(std::istream& in) {
  std::string raw;
  int line = 0;
  bool have_header = false;
  int n = 0, m = 0, k = 0;
  int header_line = 0;
  std::vector<Vertex> xs, ys;
  std::vector<Edge> edges;
  std::vector<Cost> costs;
  bool any_cost = false;
  std::optional<int> bound;
  while (std::getline(in, raw)) {
    ++line;
    const auto tok = tokenize(raw, '#');
    if (tok.empty()) continue;
    const std::string_view kind = tok[0];
    if (kind == "q") {
      if (have_header) throw ParseError(line, "duplicate header line");
      if (tok.size() != 5 || tok[1] != "paths") {
        throw ParseError(line, "header must read 'q paths <n> <m> <k>'");
      }
      const auto nn = parse_int(tok[2], line, "n");
      const auto mm = parse_int(tok[3], line, "m");
      const auto kk = parse_int(tok[4], line, "k");
      if (nn < 2 || nn > (1 << 24)) throw ParseError(line, "n out of range");
      if (mm < 0 || mm > (1 << 26)) throw ParseError(line, "m out of range");
      if (kk < 1 || 2 * kk > nn) throw ParseError(line, "k must satisfy 1 <= k <= n/2");
      n = static_cast<int>(nn);
      m = static_cast<int>(mm);
      k = static_cast<int>(kk);
      have_header = true;
      header_line = line;
      continue;
    }
    if (!have_header) throw ParseError(line, "expected header 'q paths <n> <m> <k>' first");
    if (kind == "x" || kind == "y") {
      expect_arity(tok, 2, 2, line);
      const Vertex v = parse_vertex(tok[1], n, line);
      auto& list = kind == "x" ? xs : ys;
      auto& other = kind == "x" ? ys : xs;
      if (static_cast<int>(list.size()) == k) {
        throw ParseError(line, "more than k = " + std::to_string(k) + " '" +
                                   std::string(kind) + "' lines");
      }
      if (std::find(other.begin(), other.end(), v) != other.end()) {
        throw ParseError(line, "terminal sets not disjoint");
      }
      if (std::find(list.begin(), list.end(), v) != list.end()) {
        throw ParseError(line, "terminal " + vname(v) + " listed twice");
      }
      list.push_back(v);
    } else if (kind == "e") {
      expect_arity(tok, 3, 4, line);
      if (static_cast<int>(edges.size()) == m) {
        throw ParseError(line, "more than m = " + std::to_string(m) + " edges");
      }
      const Vertex u = parse_vertex(tok[1], n, line);
      const Vertex v = parse_vertex(tok[2], n, line);
      if (u == v) throw ParseError(line, "self-loop at vertex " + vname(u));
      Cost c = 1;
      if (tok.size() == 4) {
        c = parse_int(tok[3], line, "cost");
        if (c < 1) throw ParseError(line, "cost below 1");
        if (c > kMaxEdgeCost) throw ParseError(line, "cost above " + std::to_string(kMaxEdgeCost));
        any_cost = true;
      }
      edges.push_back({u, v});
      costs.push_back(c);
    } else if (kind == "l") {
      expect_arity(tok, 2, 2, line);
      if (bound) throw ParseError(line, "duplicate length bound");
      const auto l = parse_int(tok[1], line, "length bound");
      if (l < 1 || l > static_cast<std::int64_t>(k) * (n - 1)) {
        throw ParseError(line, "length bound out of range [1, k(n-1)]");
      }
      bound = static_cast<int>(l);
    } else {
      throw ParseError(line, "unknown line type '" + std::string(kind) + "'");
    }
  }
  if (!have_header) throw ParseError(0, "missing header 'q paths <n> <m> <k>'");
  if (static_cast<int>(xs.size()) != k || static_cast<int>(ys.size()) != k) {
    throw ParseError(header_line, "expected " + std::to_string(k) +
                                      " 'x' and 'y' lines, found " +
                                      std::to_string(xs.size()) + " and " +
                                      std::to_string(ys.size()));
  }
  if (static_cast<int>(edges.size()) != m) {
    throw ParseError(header_line, "header declares " + std::to_string(m) +
                                      " edges, found " + std::to_string(edges.size()));
  }
  return PathInstance(n, std::move(edges), std::move(xs), std::move(ys),
                      any_cost ? std::optional(std::move(costs)) : std::nullopt, bound);
}

PathInstance parse_paths_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_paths_instance(in);
}

std::string to_paths_text(const PathInstance& g) {
  std::ostringstream os;
  os << "q paths " << g.n() << ' ' << g.m() << ' ' << g.k() << '\n';
  for (Vertex x : g.sources()) os << "x " << x + 1 << '\n';
  for (Vertex y : g.sinks()) os << "y " << y + 1 << '\n';
  if (g.length_bound()) os << "l " << *g.length_bound() << '\n';
  for (EdgeId e = 0; e < g.m(); ++e) {
    os << "e " << g.edge(e).from + 1 << ' ' << g.edge(e).to + 1;
    if (g.has_costs()) os << ' ' << g.cost(e);
    os << '\n';
  }
  return os.str();
}

void FlowInstance::validate() const {
  if (n < 2) throw InstanceError("need at least two vertices");
  if (source < 0 || source >= n || sink < 0 || sink >= n) {
    throw InstanceError("source or sink out of range");
  }
  if (source == sink) throw InstanceError("source equals sink");
  if (k < 1) throw InstanceError("target flow value must be at least 1");
  for (const Arc& a : arcs) {
    if (a.from < 0 || a.from >= n || a.to < 0 || a.to >= n) {
      throw InstanceError("arc endpoint out of range");
    }
    if (a.from == a.to) throw InstanceError("self-loop arc at vertex " + vname(a.from));
    if (a.capacity < 1) throw InstanceError("capacity below 1");
    if (a.cost < 1) throw InstanceError("cost below 1");
    if (a.cost > kMaxEdgeCost) throw InstanceError("cost too large");
  }
}

Cost FlowInstance::max_cost() const {
  Cost c = 1;
  for (const Arc& a : arcs) c = std::max(c, a.cost);
  return c;
}

FlowInstance parse_dimacs_flow(std::istream& in) {
  std::string raw;
  int line = 0;
  bool have_problem = false;
  int declared_arcs = 0;
  FlowInstance f;
  std::optional<std::pair<Vertex, std::int64_t>> src, snk;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw[0] == 'c') continue;
    const auto tok = tokenize(raw, '\0');
    if (tok.empty()) continue;
    const std::string_view kind = tok[0];
    if (kind == "p") {
      if (have_problem) throw ParseError(line, "duplicate problem line");
      if (tok.size() != 4 || tok[1] != "min") {
        throw ParseError(line, "problem line must read 'p min <n> <m>'");
      }
      const auto nn = parse_int(tok[2], line, "n");
      const auto mm = parse_int(tok[3], line, "m");
      if (nn < 2 || nn > (1 << 24)) throw ParseError(line, "n out of range");
      if (mm < 0 || mm > (1 << 26)) throw ParseError(line, "m out of range");
      f.n = static_cast<int>(nn);
      declared_arcs = static_cast<int>(mm);
      have_problem = true;
      continue;
    }
    if (!have_problem) throw ParseError(line, "missing problem line before data");
    if (kind == "n") {
      expect_arity(tok, 3, 3, line);
      const Vertex v = parse_vertex(tok[1], f.n, line);
      const auto supply = parse_int(tok[2], line, "supply");
      if (supply > 0) {
        if (src) throw ParseError(line, "more than one source node");
        src = {v, supply};
      } else if (supply < 0) {
        if (snk) throw ParseError(line, "more than one sink node");
        snk = {v, -supply};
      } else {
        throw ParseError(line, "node descriptor with zero supply");
      }
    } else if (kind == "a") {
      expect_arity(tok, 6, 6, line);
      const Vertex u = parse_vertex(tok[1], f.n, line);
      const Vertex v = parse_vertex(tok[2], f.n, line);
      const auto low = parse_int(tok[3], line, "lower bound");
      const auto cap = parse_int(tok[4], line, "capacity");
      const auto cost = parse_int(tok[5], line, "cost");
      if (low != 0) throw ParseError(line, "nonzero lower bound not supported");
      if (cap < 0) throw ParseError(line, "negative capacity");
      if (cap == 0) throw ParseError(line, "capacity below 1");
      if (cost < 0) throw ParseError(line, "negative cost");
      if (cost == 0) throw ParseError(line, "cost below 1");
      if (cost > kMaxEdgeCost) throw ParseError(line, "cost too large");
      if (u == v) throw ParseError(line, "self-loop arc");
      if (static_cast<int>(f.arcs.size()) == declared_arcs) {
        throw ParseError(line, "more arcs than declared");
      }
      f.arcs.push_back({u, v, cap, cost});
    } else {
      throw ParseError(line, "unknown line type '" + std::string(kind) + "'");
    }
  }
  if (!have_problem) throw ParseError(0, "missing problem line");
  if (!src) throw ParseError(0, "missing source node descriptor");
  if (!snk) throw ParseError(0, "missing sink node descriptor");
  if (src->second != snk->second) {
    throw ParseError(0, "source supply " + std::to_string(src->second) +
                            " does not match sink demand " + std::to_string(snk->second));
  }
  if (src->first == snk->first) throw ParseError(0, "source equals sink");
  if (static_cast<int>(f.arcs.size()) != declared_arcs) {
    throw ParseError(0, "problem line declares " + std::to_string(declared_arcs) +
                            " arcs, found " + std::to_string(f.arcs.size()));
  }
  if (src->second > (1 << 20)) throw ParseError(0, "flow value too large");
  f.source = src->first;
  f.sink = snk->first;
  f.k = static_cast<int>(src->second);
  f.validate();
  return f;
}

FlowInstance parse_dimacs_flow(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs_flow(in);
}

std::string to_dimacs(const FlowInstance& f) {
  std::ostringstream os;
  os << "p min " << f.n << ' ' << f.arcs.size() << '\n';
  os << "n " << f.source + 1 << ' ' << f.k << '\n';
  os << "n " << f.sink + 1 << ' ' << -f.k << '\n';
  for (const Arc& a : f.arcs) {
    os << "a " << a.from + 1 << ' ' << a.to + 1 << " 0 " << a.capacity << ' '
       << a.cost << '\n';
  }
  return os.str();
}

std::vector<Vertex> walk_vertices(const PathInstance& g, const Walk& w) {
  std::vector<Vertex> out{w.start};
  for (EdgeId e : w.edges) out.push_back(g.edge(e).to);
  return out;
}

Vertex walk_end(const PathInstance& g, const Walk& w) {
  return w.edges.empty() ? w.start : g.edge(w.edges.back()).to;
}

Cost walk_cost(const PathInstance& g, const Walk& w) {
  Cost c = 0;
  for (EdgeId e : w.edges) c += g.cost(e);
  return c;
}

int total_length(const ProperWalkSet& s) {
  int len = 0;
  for (const Walk& w : s) len += w.length();
  return len;
}

Cost total_cost(const PathInstance& g, const ProperWalkSet& s) {
  Cost c = 0;
  for (const Walk& w : s) c += walk_cost(g, w);
  return c;
}

namespace {

// Shared checks for walks and paths: chaining, source start, sink end,
// inner vertices non-terminal, distinct start and end terminals.
std::optional<std::string> chain_violation(const PathInstance& g,
                                           const std::vector<Walk>& walks) {
  if (static_cast<int>(walks.size()) != g.k()) {
    return "expected " + std::to_string(g.k()) + " walks, got " +
           std::to_string(walks.size());
  }
  std::vector<bool> start_used(g.k(), false), end_used(g.k(), false);
  for (std::size_t i = 0; i < walks.size(); ++i) {
    const Walk& w = walks[i];
    const std::string tag = "walk " + std::to_string(i + 1) + ": ";
    if (w.start < 0 || w.start >= g.n() || g.role(w.start) != Role::kSource) {
      return tag + "does not start at a source";
    }
    if (w.edges.empty()) return tag + "is empty";
    Vertex at = w.start;
    for (std::size_t j = 0; j < w.edges.size(); ++j) {
      const EdgeId e = w.edges[j];
      if (e < 0 || e >= g.m()) return tag + "unknown edge id";
      if (g.edge(e).from != at) return tag + "edges do not chain";
      at = g.edge(e).to;
      const bool last = j + 1 == w.edges.size();
      if (!last && g.is_terminal(at)) {
        return tag + "passes through terminal " + std::to_string(at + 1);
      }
    }
    if (g.role(at) != Role::kSink) return tag + "does not end at a sink";
    const int si = g.source_index(w.start);
    const int ti = g.sink_index(at);
    if (start_used[si]) return tag + "reuses source " + std::to_string(w.start + 1);
    if (end_used[ti]) return tag + "reuses sink " + std::to_string(at + 1);
    start_used[si] = end_used[ti] = true;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> walk_set_violation(const PathInstance& g,
                                              const ProperWalkSet& s) {
  if (auto v = chain_violation(g, s)) return v;
  if (total_length(s) > g.max_total_length()) {
    return "total length " + std::to_string(total_length(s)) + " exceeds k(n-1) = " +
           std::to_string(g.max_total_length());
  }
  return std::nullopt;
}

bool validate_walk_set(const PathInstance& g, const ProperWalkSet& s) {
  return !walk_set_violation(g, s).has_value();
}

std::optional<std::string> path_set_violation(const PathInstance& g,
                                              const PathSet& p) {
  if (auto v = chain_violation(g, p.paths)) return v;
  std::vector<int> owner(g.n(), -1);
  for (std::size_t i = 0; i < p.paths.size(); ++i) {
    for (Vertex v : walk_vertices(g, p.paths[i])) {
      if (owner[v] == static_cast<int>(i)) {
        return "path " + std::to_string(i + 1) + " repeats vertex " + std::to_string(v + 1);
      }
      if (owner[v] >= 0) {
        return "paths " + std::to_string(owner[v] + 1) + " and " + std::to_string(i + 1) +
               " share vertex " + std::to_string(v + 1);
      }
      owner[v] = static_cast<int>(i);
    }
  }
  Cost c = 0;
  for (const Walk& w : p.paths) c += walk_cost(g, w);
  if (c != p.cost) {
    return "recorded cost " + std::to_string(p.cost) + " differs from actual " +
           std::to_string(c);
  }
  return std::nullopt;
}

}  // namespace smallflow
