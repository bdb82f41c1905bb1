#include "smallflow/evaluator.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <string>

namespace smallflow {
namespace {

using Word = std::uint64_t;

int threads_for(int parallelism) {
  return parallelism > 0 ? parallelism : omp_get_max_threads();
}

// Q_p(B) for B a subset of the k sinks and p = 0..P, with Q_0(empty) = 1 and
// Q_p(empty) = 0 for p > 0:
//   Q_p(B) = sum_{y in B} sum_{q >= 1} Q_{p-q}(B \ y) * A(x_|B|, y, q)
// A is passed reversed: arev(i, t)[P - q] = A(x_{i+1}, y_{t+1}, q), so each
// inner sum is one contiguous dot product. Rows of layer p only read layers
// below p, so all B of one layer are independent.
class SubsetTable {
 public:
  SubsetTable(int k, std::size_t P) : k_(k), P_(P), q_((std::size_t{1} << k) * (P + 1), 0) {
    q_[0] = 1;
  }

  template <class ARev>
  void compute_layer(std::size_t p, const ARev& arev, const Field& field, int threads) {
    const long masks = long{1} << k_;
    auto cell = [&](long mask) {
      const int b = std::popcount(static_cast<unsigned long>(mask));
      if (static_cast<std::size_t>(b) > p) {
        row(mask)[p] = 0;
        return;
      }
      Word acc = 0;
      for (int t = 0; t < k_; ++t) {
        if (!((mask >> t) & 1)) continue;
        const Word* prev = row(mask ^ (long{1} << t));
        const std::size_t lo = static_cast<std::size_t>(b - 1);
        const Word* a = arev(b - 1, t) + (P_ - p);
        acc ^= field.dot({prev + lo, p - lo}, {a + lo, p - lo});
      }
      row(mask)[p] = acc;
    };
    if (threads > 1) {
#pragma omp parallel for num_threads(threads) schedule(dynamic, 4)
      for (long mask = 1; mask < masks; ++mask) cell(mask);
    } else {
      for (long mask = 1; mask < masks; ++mask) cell(mask);
    }
  }

  Word full(std::size_t p) const { return row((long{1} << k_) - 1)[p]; }
  std::size_t cells() const { return q_.size(); }

 private:
  Word* row(long mask) { return q_.data() + static_cast<std::size_t>(mask) * (P_ + 1); }
  const Word* row(long mask) const {
    return q_.data() + static_cast<std::size_t>(mask) * (P_ + 1);
  }

  int k_;
  std::size_t P_;
  std::vector<Word> q_;
};

// Reversed pair values A(x_i, y_t, q), laid out [i][t][P - q].
class ReversedPairs {
 public:
  ReversedPairs(int k, std::size_t P) : k_(k), P_(P), a_(std::size_t(k) * k * (P + 1), 0) {}
  void set(int i, int t, std::size_t q, Word v) { a_[offset(i, t) + (P_ - q)] = v; }
  const Word* operator()(int i, int t) const { return a_.data() + offset(i, t); }
  std::size_t words() const { return a_.size(); }

 private:
  std::size_t offset(int i, int t) const { return (std::size_t(i) * k_ + t) * (P_ + 1); }
  int k_;
  std::size_t P_;
  std::vector<Word> a_;
};

void check_length_bound(const PathInstance& g, int l) {
  if (l < 1 || l > g.max_total_length()) {
    throw DomainError("length bound " + std::to_string(l) + " outside [1, k(n-1)] = [1, " +
                      std::to_string(g.max_total_length()) + "]");
  }
}

// Edges that can continue a walk: tail inner, head not a source.
struct RelayEdges {
  std::vector<Vertex> tail, head;
  std::vector<Word> value;
};

RelayEdges relay_edges(const PathInstance& g, const Assignment& f) {
  RelayEdges r;
  for (EdgeId e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    if (g.role(ed.from) == Role::kInner && g.role(ed.to) != Role::kSource) {
      r.tail.push_back(ed.from);
      r.head.push_back(ed.to);
      r.value.push_back(f[e]);
    }
  }
  return r;
}

}  // namespace

void check_assignment(const PathInstance& g, const Field& field, const Assignment& f) {
  if (static_cast<int>(f.size()) != g.m()) {
    throw DomainError("assignment has " + std::to_string(f.size()) + " values for " +
                      std::to_string(g.m()) + " edges");
  }
  const Word mask = field.spec().mask();
  for (Word v : f) {
    if (v & ~mask) throw DomainError("assignment value outside the field");
  }
}

FieldElement CostSlices::cumulative(std::size_t u) const {
  Word acc = 0;
  for (std::size_t p = 0; p <= u && p < values.size(); ++p) acc ^= values[p];
  return {acc};
}

std::optional<std::size_t> CostSlices::first_nonzero() const {
  for (std::size_t p = 0; p < values.size(); ++p) {
    if (values[p] != 0) return p;
  }
  return std::nullopt;
}

CostSlices eval_length_slices(const PathInstance& g, int l, const Assignment& f,
                              const Field& field, EvalStats* stats) {
  check_length_bound(g, l);
  check_assignment(g, field, f);
  const int k = g.k();
  const int n = g.n();
  const std::size_t P = static_cast<std::size_t>(l);
  // Every other walk needs at least one edge.
  const int max_q = l - (k - 1);
  if (max_q < 1) return CostSlices{std::vector<Word>(P + 1, 0)};

  const RelayEdges relay = relay_edges(g, f);
  ReversedPairs arev(k, P);
  std::vector<Word> cur(n), next(n), prod(relay.tail.size());
  std::uint64_t pair_cells = 0;
  for (int i = 0; i < k; ++i) {
    const Vertex x = g.sources()[i];
    std::fill(cur.begin(), cur.end(), 0);
    for (EdgeId e : g.out_edges(x)) {
      const Vertex z = g.edge(e).to;
      if (g.role(z) != Role::kSource) cur[z] ^= f[e];
    }
    for (int q = 1;; ++q) {
      for (int t = 0; t < k; ++t) arev.set(i, t, q, cur[g.sinks()[t]]);
      pair_cells += n;
      if (q == max_q) break;
      for (std::size_t j = 0; j < relay.tail.size(); ++j) prod[j] = cur[relay.tail[j]];
      field.mul_elementwise(prod, prod, relay.value);
      std::fill(next.begin(), next.end(), 0);
      for (std::size_t j = 0; j < relay.tail.size(); ++j) next[relay.head[j]] ^= prod[j];
      cur.swap(next);
    }
  }

  SubsetTable table(k, P);
  CostSlices out;
  out.values.assign(P + 1, 0);
  for (std::size_t p = 1; p <= P; ++p) {
    table.compute_layer(p, arev, field, 1);
    out.values[p] = table.full(p);
  }
  if (stats) {
    stats->pair_cells = pair_cells;
    stats->subset_cells = table.cells();
    stats->table_bytes = (table.cells() + arev.words()) * sizeof(Word);
  }
  return out;
}

FieldElement eval_length_bounded_seq(const PathInstance& g, int l, const Assignment& f,
                                     const Field& field, EvalStats* stats) {
  const CostSlices s = eval_length_slices(g, l, f, field, stats);
  return s.cumulative(static_cast<std::size_t>(l));
}

FieldElement eval_length_bounded_par(const PathInstance& g, int l, const Assignment& f,
                                     const Field& field, const EvalOptions& options,
                                     EvalStats* stats) {
  check_length_bound(g, l);
  check_assignment(g, field, f);
  const int k = g.k();
  const int threads = threads_for(options.parallelism);
  const std::size_t P = static_cast<std::size_t>(l);
  const int max_q = l - (k - 1);
  if (max_q < 1) return FieldElement{0};

  // Rows: inner vertices then sources. Columns: inner vertices then sinks.
  std::vector<Vertex> inner;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (g.role(v) == Role::kInner) inner.push_back(v);
  }
  const int ni = static_cast<int>(inner.size());
  const int rows = ni + k;
  const int cols = ni + k;
  std::vector<int> row_of(g.n(), -1), col_of(g.n(), -1);
  for (int a = 0; a < ni; ++a) row_of[inner[a]] = col_of[inner[a]] = a;
  for (int i = 0; i < k; ++i) {
    row_of[g.sources()[i]] = ni + i;
    col_of[g.sinks()[i]] = ni + i;
  }

  const std::size_t mat = std::size_t(rows) * cols;
  const std::size_t tmat = std::size_t(cols) * ni;
  const std::size_t bytes =
      (std::size_t(max_q) * (mat + tmat) + (std::size_t{1} << k) * (P + 1)) * sizeof(Word);
  if (bytes > options.memory_ceiling) {
    throw BudgetError("doubling tables need " + std::to_string(bytes) +
                      " bytes, above the memory ceiling");
  }
  // q[d] = Q_d as a rows x cols matrix; tq[d] holds its inner rows transposed
  // (tq[d][z * ni + u] = Q_d(u, z)) so the split sum is a contiguous dot.
  std::vector<std::vector<Word>> q(max_q + 1), tq(max_q + 1);
  q[1].assign(mat, 0);
  for (EdgeId e = 0; e < g.m(); ++e) {
    const int r = row_of[g.edge(e).from];
    const int c = col_of[g.edge(e).to];
    if (r >= 0 && c >= 0) q[1][std::size_t(r) * cols + c] ^= f[e];
  }
  auto transpose = [&](int d) {
    tq[d].assign(tmat, 0);
    for (int u = 0; u < ni; ++u) {
      for (int z = 0; z < cols; ++z) tq[d][std::size_t(z) * ni + u] = q[d][std::size_t(u) * cols + z];
    }
  };
  transpose(1);

  // Round r computes every length in (2^(r-1), 2^r]; both halves are shorter.
  for (int lo = 1; lo < max_q; lo *= 2) {
    const int hi = std::min(2 * lo, max_q);
    for (int d = lo + 1; d <= hi; ++d) q[d].assign(mat, 0);
    const long tasks = long(hi - lo) * rows;
#pragma omp parallel for num_threads(threads) schedule(static)
    for (long task = 0; task < tasks; ++task) {
      const int d = lo + 1 + static_cast<int>(task / rows);
      const int x = static_cast<int>(task % rows);
      const int c = (d + 1) / 2;
      const int fl = d / 2;
      const Word* left = q[c].data() + std::size_t(x) * cols;
      Word* out = q[d].data() + std::size_t(x) * cols;
      for (int z = 0; z < cols; ++z) {
        out[z] = field.dot({left, std::size_t(ni)}, {tq[fl].data() + std::size_t(z) * ni, std::size_t(ni)});
      }
    }
#pragma omp parallel for num_threads(threads) schedule(static)
    for (int d = lo + 1; d <= hi; ++d) transpose(d);
  }

  ReversedPairs arev(k, P);
  for (int i = 0; i < k; ++i) {
    for (int t = 0; t < k; ++t) {
      for (int d = 1; d <= max_q; ++d) {
        arev.set(i, t, d, q[d][std::size_t(ni + i) * cols + ni + t]);
      }
    }
  }
  SubsetTable table(k, P);
  Word acc = 0;
  for (std::size_t p = 1; p <= P; ++p) {
    table.compute_layer(p, arev, field, threads);
    acc ^= table.full(p);
  }
  if (stats) {
    stats->pair_cells = std::uint64_t(max_q) * mat;
    stats->subset_cells = table.cells();
    stats->table_bytes = bytes;
  }
  return {acc};
}

std::size_t cost_table_bytes(const PathInstance& g, std::int64_t u_max) {
  const std::size_t P = static_cast<std::size_t>(std::max<std::int64_t>(u_max, 0));
  const std::size_t k = static_cast<std::size_t>(g.k());
  const std::size_t window = static_cast<std::size_t>(g.max_cost()) + 1;
  return ((std::size_t{1} << k) * (P + 1) + k * k * (P + 1) + window * k * g.n()) *
         sizeof(Word);
}

CostSlices eval_cost_slices(const PathInstance& g, std::int64_t u_max, const Assignment& f,
                            const Field& field, const CostEvalOptions& options,
                            EvalStats* stats) {
  if (u_max < g.k()) {
    throw DomainError("cost bound " + std::to_string(u_max) + " below k = " +
                      std::to_string(g.k()));
  }
  check_assignment(g, field, f);
  const std::size_t bytes = cost_table_bytes(g, u_max);
  if (bytes > options.memory_ceiling) {
    throw BudgetError("cost tables for U = " + std::to_string(u_max) + " need " +
                      std::to_string(bytes) + " bytes, above the memory ceiling of " +
                      std::to_string(options.memory_ceiling));
  }
  const int k = g.k();
  const int n = g.n();
  const int threads = threads_for(options.parallelism);
  const std::size_t P = static_cast<std::size_t>(u_max);
  const std::size_t window = static_cast<std::size_t>(g.max_cost()) + 1;

  // Targets of the pair table: inner vertices and sinks.
  std::vector<Vertex> targets;
  for (Vertex v = 0; v < n; ++v) {
    if (g.role(v) != Role::kSource) targets.push_back(v);
  }
  const long cells = long(k) * static_cast<long>(targets.size());
  // ring[(d mod window) * k * n + i * n + z] = Q_d(x_i, z)
  std::vector<Word> ring(window * k * n, 0);
  auto slot = [&](std::size_t d, int i) { return ring.data() + ((d % window) * k + i) * n; };

  ReversedPairs arev(k, P);
  SubsetTable table(k, P);
  CostSlices out;
  out.values.assign(P + 1, 0);
  std::uint64_t pair_cells = 0;
  for (std::size_t d = 1; d <= P; ++d) {
#pragma omp parallel for num_threads(threads) schedule(static) if (threads > 1)
    for (long cell = 0; cell < cells; ++cell) {
      const int i = static_cast<int>(cell / static_cast<long>(targets.size()));
      const Vertex z = targets[cell % static_cast<long>(targets.size())];
      const Vertex x = g.sources()[i];
      Word acc = 0;
      for (EdgeId e : g.in_edges(z)) {
        const std::size_t c = static_cast<std::size_t>(g.cost(e));
        if (c > d) continue;
        const Vertex u = g.edge(e).from;
        if (u == x) {
          if (c == d) acc ^= f[e];
        } else if (g.role(u) == Role::kInner && c < d) {
          const Word prev = slot(d - c, i)[u];
          if (prev != 0) acc ^= field.mul_raw(prev, f[e]);
        }
      }
      slot(d, i)[z] = acc;
    }
    pair_cells += static_cast<std::uint64_t>(cells);
    for (int i = 0; i < k; ++i) {
      for (int t = 0; t < k; ++t) arev.set(i, t, d, slot(d, i)[g.sinks()[t]]);
    }
    table.compute_layer(d, arev, field, threads);
    out.values[d] = table.full(d);
    if (options.stop_at_first_nonzero && out.values[d] != 0) {
      out.values.resize(d + 1);
      break;
    }
  }
  if (stats) {
    stats->pair_cells = pair_cells;
    stats->subset_cells = table.cells();
    stats->table_bytes = bytes;
  }
  return out;
}

CostSlices eval_with_edge_removed(const PathInstance& g, EdgeId removed, std::int64_t u_max,
                                  const Assignment& f, const Field& field,
                                  const CostEvalOptions& options) {
  if (removed < 0 || removed >= g.m()) {
    throw DomainError("unknown edge id " + std::to_string(removed + 1));
  }
  check_assignment(g, field, f);
  Assignment cut = f;
  cut[removed] = 0;
  return eval_cost_slices(g, u_max, cut, field, options);
}

Subdivision subdivide_costs(const PathInstance& g) {
  std::vector<Edge> edges;
  std::vector<EdgeId> carry(g.m());
  int n = g.n();
  for (EdgeId e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    carry[e] = static_cast<EdgeId>(edges.size());
    Vertex at = ed.from;
    for (Cost step = 1; step < g.cost(e); ++step) {
      edges.push_back({at, n});
      at = n++;
    }
    edges.push_back({at, ed.to});
  }
  return {PathInstance(n, std::move(edges), g.sources(), g.sinks()), std::move(carry)};
}

Assignment carry_assignment(const Subdivision& s, const Assignment& f) {
  Assignment out(s.instance.m(), 1);
  for (std::size_t e = 0; e < s.carry.size(); ++e) out[s.carry[e]] = f[e];
  return out;
}

}  // namespace smallflow
