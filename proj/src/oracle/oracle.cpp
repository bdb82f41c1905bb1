#include "smallflow/oracle.hpp"

#include <algorithm>
#include <string>

#include "mcmf.hpp"

namespace smallflow::oracle {
namespace {

struct StoredWalk {
  Walk walk;
  int sink;  // index in Y
  std::int64_t length;
  std::int64_t cost;
};

class Enumerator {
 public:
  // Sets are kept when their total (length or cost) is at most `limit`, and,
  // if `exact`, equal to it.
  Enumerator(const PathInstance& g, bool by_cost, std::int64_t limit, bool exact,
             std::uint64_t budget)
      : g_(g), by_cost_(by_cost), limit_(limit), exact_(exact), budget_(budget) {}

  void run(const std::function<void(const ProperWalkSet&)>& visit) {
    const int k = g_.k();
    // Every other walk contributes at least 1 to the total.
    const std::int64_t per_walk = limit_ - (k - 1);
    if (per_walk < 1) return;
    walks_.assign(k, {});
    for (int i = 0; i < k; ++i) {
      Walk w{g_.sources()[i], {}};
      extend(i, g_.sources()[i], w, 0, per_walk);
    }
    ProperWalkSet current(k);
    std::vector<bool> used(k, false);
    choose(0, 0, current, used, visit);
  }

 private:
  void charge() {
    if (++spent_ > budget_) {
      throw BudgetError("walk enumeration exceeded its budget of " + std::to_string(budget_));
    }
  }

  void extend(int i, Vertex at, Walk& w, std::int64_t total, std::int64_t cap) {
    for (EdgeId e : g_.out_edges(at)) {
      const Vertex to = g_.edge(e).to;
      const std::int64_t step = by_cost_ ? g_.cost(e) : 1;
      if (total + step > cap) continue;
      if (g_.role(to) == Role::kSource) continue;
      w.edges.push_back(e);
      if (g_.role(to) == Role::kSink) {
        charge();
        walks_[i].push_back({w, g_.sink_index(to), static_cast<std::int64_t>(w.edges.size()),
                             walk_cost(g_, w)});
      } else {
        extend(i, to, w, total + step, cap);
      }
      w.edges.pop_back();
    }
  }

  void choose(int i, std::int64_t total, ProperWalkSet& current, std::vector<bool>& used,
              const std::function<void(const ProperWalkSet&)>& visit) {
    const int k = g_.k();
    if (i == k) {
      if (exact_ && total != limit_) return;
      charge();
      visit(current);
      return;
    }
    for (const StoredWalk& sw : walks_[i]) {
      if (used[sw.sink]) continue;
      const std::int64_t t = total + (by_cost_ ? sw.cost : sw.length);
      if (t + (k - i - 1) > limit_) continue;
      used[sw.sink] = true;
      current[i] = sw.walk;
      choose(i + 1, t, current, used, visit);
      used[sw.sink] = false;
    }
  }

  const PathInstance& g_;
  bool by_cost_;
  std::int64_t limit_;
  bool exact_;
  std::uint64_t budget_;
  std::uint64_t spent_ = 0;
  std::vector<std::vector<StoredWalk>> walks_;
};

}  // namespace

void enumerate_proper_walk_sets(const PathInstance& g, WalkBound bound,
                                const std::function<void(const ProperWalkSet&)>& visit,
                                std::uint64_t budget) {
  if (bound.mode == BoundMode::kLengthAtMost) {
    const std::int64_t l = std::min<std::int64_t>(bound.value, g.max_total_length());
    Enumerator(g, false, l, false, budget).run(visit);
  } else {
    Enumerator(g, true, bound.value, true, budget).run(visit);
  }
}

std::vector<ProperWalkSet> proper_walk_sets(const PathInstance& g, WalkBound bound,
                                            std::uint64_t budget) {
  std::vector<ProperWalkSet> out;
  enumerate_proper_walk_sets(g, bound, [&](const ProperWalkSet& s) { out.push_back(s); },
                             budget);
  return out;
}

Monomial monomial_of(const ProperWalkSet& s) {
  Monomial m;
  for (const Walk& w : s) m.insert(m.end(), w.edges.begin(), w.edges.end());
  std::sort(m.begin(), m.end());
  return m;
}

void SymbolicPolynomial::toggle(const Monomial& m) {
  if (auto it = terms_.find(m); it != terms_.end()) {
    terms_.erase(it);
  } else {
    terms_.insert(m);
  }
}

FieldElement SymbolicPolynomial::evaluate(const Assignment& f, const Field& field) const {
  std::uint64_t acc = 0;
  for (const Monomial& m : terms_) {
    std::uint64_t prod = 1;
    for (EdgeId e : m) prod = field.mul_raw(prod, f[e]);
    acc ^= prod;
  }
  return {acc};
}

SymbolicPolynomial symbolic_char2_polynomial(const PathInstance& g, WalkBound bound,
                                             std::uint64_t budget) {
  SymbolicPolynomial poly;
  enumerate_proper_walk_sets(g, bound, [&](const ProperWalkSet& s) { poly.toggle(monomial_of(s)); },
                             budget);
  return poly;
}

std::vector<SymbolicPolynomial> symbolic_slices(const PathInstance& g, WalkBound bound,
                                                std::uint64_t budget) {
  std::vector<SymbolicPolynomial> out(static_cast<std::size_t>(std::max<std::int64_t>(bound.value, 0)) + 1);
  const bool by_cost = bound.mode == BoundMode::kCostExactly;
  std::int64_t limit = bound.value;
  if (!by_cost) limit = std::min<std::int64_t>(limit, g.max_total_length());
  Enumerator(g, by_cost, limit, false, budget).run([&](const ProperWalkSet& s) {
    const std::int64_t p = by_cost ? total_cost(g, s) : total_length(s);
    out[static_cast<std::size_t>(p)].toggle(monomial_of(s));
  });
  return out;
}

std::optional<Signature> signature(const PathInstance& g, const ProperWalkSet& s) {
  std::vector<std::vector<Vertex>> verts;
  for (const Walk& w : s) verts.push_back(walk_vertices(g, w));
  const int k = static_cast<int>(s.size());
  for (int i = 0; i < k; ++i) {
    for (int a = 0; a < static_cast<int>(verts[i].size()); ++a) {
      const Vertex v = verts[i][a];
      for (int j = 0; j < k; ++j) {
        if (j == i) continue;
        const auto it = std::find(verts[j].begin(), verts[j].end(), v);
        if (it != verts[j].end()) {
          return Signature{i, j, a, static_cast<int>(it - verts[j].begin()), v};
        }
      }
    }
  }
  return std::nullopt;
}

ProperWalkSet apply_phi(const PathInstance& g, const ProperWalkSet& s) {
  const auto sig = signature(g, s);
  if (!sig) return s;
  ProperWalkSet out = s;
  const Walk& wi = s[sig->i];
  const Walk& wj = s[sig->j];
  // Vertex at position p is reached after p edges.
  Walk ni{wi.start, {wi.edges.begin(), wi.edges.begin() + sig->pos_i}};
  Walk nj{wj.start, {wj.edges.begin(), wj.edges.begin() + sig->pos_j}};
  ni.edges.insert(ni.edges.end(), wj.edges.begin() + sig->pos_j, wj.edges.end());
  nj.edges.insert(nj.edges.end(), wi.edges.begin() + sig->pos_i, wi.edges.end());
  out[sig->i] = std::move(ni);
  out[sig->j] = std::move(nj);
  return out;
}

bool walks_simple(const PathInstance& g, const ProperWalkSet& s) {
  for (const Walk& w : s) {
    auto v = walk_vertices(g, w);
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) return false;
  }
  return true;
}

namespace {

class DisjointSearch {
 public:
  DisjointSearch(const PathInstance& g, bool by_cost, std::optional<Cost> bound)
      : g_(g), by_cost_(by_cost), bound_(bound), used_(g.n(), false), sink_used_(g.k(), false),
        current_(g.k()) {}

  std::optional<BruteForceResult> run() {
    search_source(0, 0);
    if (!best_) return std::nullopt;
    PathSet ps;
    ps.paths = *best_;
    ps.cost = total_cost(g_, ps.paths);
    return BruteForceResult{best_value_, std::move(ps)};
  }

 private:
  bool hopeless(Cost value, int next_source) const {
    const Cost floor = value + (g_.k() - next_source);
    if (bound_ && floor > *bound_) return true;
    return best_ && floor >= best_value_;
  }

  void search_source(int i, Cost value) {
    if (i == g_.k()) {
      if (bound_ && value > *bound_) return;
      if (!best_ || value < best_value_) {
        best_ = current_;
        best_value_ = value;
      }
      return;
    }
    if (hopeless(value, i)) return;
    const Vertex x = g_.sources()[i];
    used_[x] = true;
    current_[i] = Walk{x, {}};
    walk_from(i, x, value);
    used_[x] = false;
  }

  void walk_from(int i, Vertex at, Cost value) {
    for (EdgeId e : g_.out_edges(at)) {
      const Vertex to = g_.edge(e).to;
      if (used_[to] || g_.role(to) == Role::kSource) continue;
      const Cost v = value + (by_cost_ ? g_.cost(e) : 1);
      if (hopeless(v, i + 1)) continue;
      current_[i].edges.push_back(e);
      used_[to] = true;
      if (g_.role(to) == Role::kSink) {
        const int t = g_.sink_index(to);
        if (!sink_used_[t]) {
          sink_used_[t] = true;
          search_source(i + 1, v);
          sink_used_[t] = false;
        }
      } else {
        walk_from(i, to, v);
      }
      used_[to] = false;
      current_[i].edges.pop_back();
    }
  }

  const PathInstance& g_;
  bool by_cost_;
  std::optional<Cost> bound_;
  std::vector<bool> used_;
  std::vector<bool> sink_used_;
  std::vector<Walk> current_;
  std::optional<std::vector<Walk>> best_;
  Cost best_value_ = 0;
};

}  // namespace

std::optional<BruteForceResult> brute_force_disjoint_paths(const PathInstance& g,
                                                           Objective objective,
                                                           std::optional<Cost> bound,
                                                           int vertex_limit) {
  if (g.n() > vertex_limit) {
    throw BudgetError("brute force limited to n <= " + std::to_string(vertex_limit) +
                      ", instance has n = " + std::to_string(g.n()));
  }
  return DisjointSearch(g, objective == Objective::kCost, bound).run();
}

std::optional<BruteForceResult> disjoint_paths_by_flow(const PathInstance& g) {
  const int n = g.n();
  const int S = 2 * n;
  const int T = 2 * n + 1;
  detail::MinCostFlow mcf(2 * n + 2);
  for (Vertex v = 0; v < n; ++v) mcf.add_arc(2 * v, 2 * v + 1, 1, 0);
  std::vector<int> arc_of(g.m(), -1);
  for (EdgeId e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    if (g.role(ed.from) == Role::kSink || g.role(ed.to) == Role::kSource) continue;
    arc_of[e] = mcf.add_arc(2 * ed.from + 1, 2 * ed.to, 1, g.cost(e));
  }
  for (Vertex x : g.sources()) mcf.add_arc(S, 2 * x, 1, 0);
  for (Vertex y : g.sinks()) mcf.add_arc(2 * y + 1, T, 1, 0);
  const auto cost = mcf.run(S, T, g.k());
  if (!cost) return std::nullopt;

  std::vector<EdgeId> next(n, -1);
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (arc_of[e] >= 0 && mcf.flow(arc_of[e]) > 0) next[g.edge(e).from] = e;
  }
  PathSet ps;
  for (Vertex x : g.sources()) {
    Walk w{x, {}};
    for (Vertex at = x; g.role(at) != Role::kSink;) {
      const EdgeId e = next[at];
      w.edges.push_back(e);
      at = g.edge(e).to;
    }
    ps.paths.push_back(std::move(w));
  }
  ps.cost = total_cost(g, ps.paths);
  return BruteForceResult{*cost, std::move(ps)};
}

std::optional<FlowSolution> classic_min_cost_flow(const FlowInstance& K) {
  K.validate();
  detail::MinCostFlow mcf(K.n);
  std::vector<int> ids;
  for (const Arc& a : K.arcs) ids.push_back(mcf.add_arc(a.from, a.to, a.capacity, a.cost));
  const auto cost = mcf.run(K.source, K.sink, K.k);
  if (!cost) return std::nullopt;
  FlowSolution sol{*cost, {}};
  for (int id : ids) sol.flow.push_back(mcf.flow(id));
  return sol;
}

bool residual_has_no_negative_cycle(const FlowInstance& K, const std::vector<std::int64_t>& flow) {
  struct R {
    int u, v;
    std::int64_t w;
  };
  std::vector<R> res;
  for (std::size_t a = 0; a < K.arcs.size(); ++a) {
    const Arc& arc = K.arcs[a];
    if (flow[a] < arc.capacity) res.push_back({arc.from, arc.to, arc.cost});
    if (flow[a] > 0) res.push_back({arc.to, arc.from, -arc.cost});
  }
  std::vector<std::int64_t> dist(K.n, 0);
  for (int round = 0; round < K.n; ++round) {
    bool changed = false;
    for (const R& r : res) {
      if (dist[r.u] + r.w < dist[r.v]) {
        dist[r.v] = dist[r.u] + r.w;
        changed = true;
      }
    }
    if (!changed) return true;
  }
  return false;
}

}  // namespace smallflow::oracle
