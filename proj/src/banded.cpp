#include "smallflow/banded.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <queue>
#include <string>

namespace smallflow {

namespace {

using Word = std::uint64_t;

int threads_for(int parallelism) {
  return parallelism > 0 ? parallelism : omp_get_max_threads();
}

bool all_zero(const std::vector<Word>& v) {
  return std::all_of(v.begin(), v.end(), [](Word x) { return x == 0; });
}

}  // namespace

BandedEvaluator::BandedEvaluator(const PathInstance& g, std::vector<Cost> minor,
                                 const Field& field, EvalOptions options)
    : g_(g),
      minor_(std::move(minor)),
      field_(field),
      options_(options),
      n_(g.n()),
      k_(g.k()),
      subsets_(1u << g.k()) {
  if (static_cast<int>(minor_.size()) != g.m()) {
    throw DomainError("minor weights have " + std::to_string(minor_.size()) + " entries for " +
                      std::to_string(g.m()) + " edges");
  }
  for (Cost w : minor_) {
    if (w < 0) throw DomainError("negative minor weight");
  }
  for (Vertex v = 0; v < n_; ++v) {
    if (g.role(v) != Role::kSource) targets_.push_back(v);
  }

  // Reverse Dijkstra from the sinks outside b, relaying through inner vertices.
  to_sink_.assign(std::size_t(subsets_) * n_, kFar);
  for (unsigned b = 0; b < subsets_; ++b) {
    Cost* dist = to_sink_.data() + std::size_t(b) * n_;
    using Item = std::pair<Cost, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int t = 0; t < k_; ++t) {
      if (!(b >> t & 1)) {
        dist[g.sinks()[t]] = 0;
        heap.push({0, g.sinks()[t]});
      }
    }
    while (!heap.empty()) {
      const auto [d, v] = heap.top();
      heap.pop();
      if (d != dist[v]) continue;
      for (EdgeId e : g.in_edges(v)) {
        const Vertex u = g.edge(e).from;
        if (g.role(u) != Role::kInner) continue;
        if (d + g.cost(e) < dist[u]) {
          dist[u] = d + g.cost(e);
          heap.push({dist[u], u});
        }
      }
    }
  }
  rest_.assign(k_ + 1, 0);
  for (int i = k_ - 1; i >= 0; --i) {
    Cost best = kFar;
    for (EdgeId e : g.out_edges(g.sources()[i])) {
      const Vertex z = g.edge(e).to;
      if (g.role(z) == Role::kSource) continue;
      best = std::min(best, g.cost(e) + to_sink_[z]);
    }
    rest_[i] = std::min(kFar, best + rest_[i + 1]);
  }
}

bool BandedEvaluator::r_feasible(Cost d, unsigned b, Vertex z) const {
  const int done = std::popcount(b);
  return d + to_sink_[std::size_t(b) * n_ + z] + rest_[done + 1] <= major_limit_;
}

bool BandedEvaluator::s_feasible(Cost d, unsigned b) const {
  return d + rest_[std::popcount(b)] <= major_limit_;
}

void BandedEvaluator::charge(std::size_t words) const {
  const std::size_t bytes = words * sizeof(Word);
  std::size_t now;
#pragma omp atomic capture
  now = bytes_ += bytes;
  if (now > options_.memory_ceiling) {
    throw BudgetError("two-level slice tables need more than " +
                      std::to_string(options_.memory_ceiling) + " bytes");
  }
#pragma omp critical(smallflow_banded_peak)
  peak_bytes_ = std::max(peak_bytes_, now);
}

const std::vector<std::vector<Word>>& BandedEvaluator::forward(const Assignment& f,
                                                               Cost major_limit,
                                                               Cost minor_limit) {
  check_assignment(g_, field_, f);
  if (major_limit < 0 || minor_limit < 0) throw DomainError("negative slice limit");
  f_ = f;
  major_limit_ = major_limit;
  minor_limit_ = minor_limit;
  r_.clear();
  s_.clear();
  bytes_ = peak_bytes_ = 0;
  live_states_ = 0;
  const std::size_t len = std::size_t(minor_limit) + 1;
  const std::size_t layers = std::size_t(major_limit) + 1;
  charge(layers * subsets_ * (n_ + 1) * sizeof(Vec) / sizeof(Word));
  r_.resize(layers * subsets_ * n_);
  s_.resize(layers * subsets_);

  charge(len);
  s_[s_index(0, 0)].assign(len, 0);
  s_[s_index(0, 0)][0] = 1;
  live_states_ = 1;

  const int threads = threads_for(options_.parallelism);
  const long cells = long(subsets_) * long(targets_.size());
  std::atomic<std::uint64_t> live{1};
  std::exception_ptr failure;
  for (Cost d = 1; d <= major_limit; ++d) {
#pragma omp parallel for num_threads(threads) schedule(dynamic, 16)
    for (long c = 0; c < cells; ++c) {
      const unsigned b = unsigned(c / long(targets_.size()));
      const Vertex z = targets_[c % long(targets_.size())];
      const int done = std::popcount(b);
      if (done == k_) continue;
      if (g_.role(z) == Role::kSink && (b >> g_.sink_index(z) & 1)) continue;
      if (!r_feasible(d, b, z)) continue;
      const Vertex x = g_.sources()[done];
      Vec acc;
      try {
        for (EdgeId e : g_.in_edges(z)) {
          const Cost ce = g_.cost(e);
          const Cost we = minor_[e];
          if (ce > d || we > minor_limit) continue;
          const Vertex u = g_.edge(e).from;
          const Vec* src;
          if (u == x) {
            src = &s_[s_index(d - ce, b)];
          } else if (g_.role(u) == Role::kInner) {
            src = &r_[r_index(d - ce, b, u)];
          } else {
            continue;
          }
          if (src->empty()) continue;
          if (acc.empty()) {
            charge(len);
            acc.assign(len, 0);
          }
          field_.axpy({acc.data() + we, len - we}, f_[e], {src->data(), len - we});
        }
      } catch (...) {
#pragma omp critical(smallflow_banded_failure)
        if (!failure) failure = std::current_exception();
        continue;
      }
      if (acc.empty()) continue;
      if (all_zero(acc)) {
#pragma omp atomic
        bytes_ -= len * sizeof(Word);
        continue;
      }
      r_[r_index(d, b, z)] = std::move(acc);
      live.fetch_add(1, std::memory_order_relaxed);
    }
    if (failure) std::rethrow_exception(failure);

    for (unsigned b = 1; b < subsets_; ++b) {
      if (!s_feasible(d, b)) continue;
      Vec acc;
      for (int t = 0; t < k_; ++t) {
        if (!(b >> t & 1)) continue;
        const Vec& src = r_[r_index(d, b & ~(1u << t), g_.sinks()[t])];
        if (src.empty()) continue;
        if (acc.empty()) {
          charge(len);
          acc.assign(len, 0);
        }
        for (std::size_t w = 0; w < len; ++w) acc[w] ^= src[w];
      }
      if (acc.empty()) continue;
      if (all_zero(acc)) {
        bytes_ -= len * sizeof(Word);
        continue;
      }
      s_[s_index(d, b)] = std::move(acc);
      live.fetch_add(1, std::memory_order_relaxed);
    }
  }
  live_states_ = live.load();

  full_.assign(layers, std::vector<Word>(len, 0));
  for (Cost d = 0; d <= major_limit; ++d) {
    const Vec& s = s_[s_index(d, subsets_ - 1)];
    if (!s.empty()) full_[d] = s;
  }
  return full_;
}

std::optional<BandedEvaluator::Slice> BandedEvaluator::first_nonzero() const {
  for (std::size_t d = 0; d < full_.size(); ++d) {
    for (std::size_t w = 0; w < full_[d].size(); ++w) {
      if (full_[d][w] != 0) return Slice{Cost(d), Cost(w)};
    }
  }
  return std::nullopt;
}

std::uint64_t BandedEvaluator::value(Slice s) const {
  if (s.major < 0 || s.major > major_limit_ || s.minor < 0 || s.minor > minor_limit_) {
    throw DomainError("slice outside the evaluated limits");
  }
  return full_[s.major][s.minor];
}

std::vector<Word> BandedEvaluator::gradient(Slice target) const {
  value(target);  // range check
  const Cost top = target.major;
  const std::size_t len = std::size_t(target.minor) + 1;
  const int threads = threads_for(options_.parallelism);
  const unsigned full_set = subsets_ - 1;

  // Adjoints only need minor indices up to the target's.
  std::vector<Vec> adj_r(r_.size()), adj_s(s_.size());
  adj_s[s_index(top, full_set)].assign(len, 0);
  adj_s[s_index(top, full_set)][target.minor] = 1;

  std::vector<std::vector<Word>> grad(threads, std::vector<Word>(g_.m(), 0));
  const long cells = long(subsets_) * long(targets_.size());
  for (Cost d = top; d >= 0; --d) {
    // Completed walk sets feed the next walk's first edge.
    for (unsigned b = 0; b < full_set; ++b) {
      if (!s_feasible(d, b)) continue;
      const Vertex x = g_.sources()[std::popcount(b)];
      Vec& acc = adj_s[s_index(d, b)];
      for (EdgeId e : g_.out_edges(x)) {
        const Vertex z = g_.edge(e).to;
        const Cost ce = g_.cost(e);
        const std::size_t we = std::size_t(minor_[e]);
        if (g_.role(z) == Role::kSource || d + ce > top || we >= len) continue;
        const Vec& next = adj_r[r_index(d + ce, b, z)];
        if (next.empty()) continue;
        if (acc.empty()) acc.assign(len, 0);
        field_.axpy({acc.data(), len - we}, f_[e], {next.data() + we, len - we});
      }
    }
#pragma omp parallel for num_threads(threads) schedule(dynamic, 16)
    for (long c = 0; c < cells; ++c) {
      const unsigned b = unsigned(c / long(targets_.size()));
      const Vertex z = targets_[c % long(targets_.size())];
      if (std::popcount(b) == k_) continue;
      if (!r_feasible(d, b, z)) continue;
      Vec acc;
      if (g_.role(z) == Role::kSink) {
        const int t = g_.sink_index(z);
        if (b >> t & 1) continue;
        const Vec& up = adj_s[s_index(d, b | (1u << t))];
        if (!up.empty()) acc = up;
      } else {
        for (EdgeId e : g_.out_edges(z)) {
          const Vertex v = g_.edge(e).to;
          const Cost ce = g_.cost(e);
          const std::size_t we = std::size_t(minor_[e]);
          if (g_.role(v) == Role::kSource || d + ce > top || we >= len) continue;
          if (g_.role(v) == Role::kSink && (b >> g_.sink_index(v) & 1)) continue;
          const Vec& next = adj_r[r_index(d + ce, b, v)];
          if (next.empty()) continue;
          if (acc.empty()) acc.assign(len, 0);
          field_.axpy({acc.data(), len - we}, f_[e], {next.data() + we, len - we});
        }
      }
      if (acc.empty()) continue;

      // d R(d, b, z) / d x_e for every edge e into z.
      std::vector<Word>& gr = grad[omp_get_thread_num()];
      const Vertex x = g_.sources()[std::popcount(b)];
      for (EdgeId e : g_.in_edges(z)) {
        const Cost ce = g_.cost(e);
        const std::size_t we = std::size_t(minor_[e]);
        if (ce > d || we >= len) continue;
        const Vertex u = g_.edge(e).from;
        const Vec* src;
        if (u == x) {
          src = &s_[s_index(d - ce, b)];
        } else if (g_.role(u) == Role::kInner) {
          src = &r_[r_index(d - ce, b, u)];
        } else {
          continue;
        }
        if (src->empty()) continue;
        gr[e] ^= field_.dot({acc.data() + we, len - we}, {src->data(), len - we});
      }
      adj_r[r_index(d, b, z)] = std::move(acc);
    }
    // Adjoints above d + C_max are no longer read.
    const Cost stale = d + g_.max_cost();
    if (stale <= top) {
      for (unsigned b = 0; b < subsets_; ++b) {
        adj_s[s_index(stale, b)] = Vec();
        for (Vertex z = 0; z < n_; ++z) adj_r[r_index(stale, b, z)] = Vec();
      }
    }
  }
  for (int t = 1; t < threads; ++t) {
    for (EdgeId e = 0; e < g_.m(); ++e) grad[0][e] ^= grad[t][e];
  }
  return grad[0];
}

}  // namespace smallflow
