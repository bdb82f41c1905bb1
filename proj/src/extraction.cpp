#include "smallflow/extraction.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <limits>

#include "smallflow/banded.hpp"

namespace smallflow {

namespace {

EvalOptions eval_options(const TestParams& p, int parallelism) {
  EvalOptions o;
  o.parallelism = parallelism;
  o.memory_ceiling = p.memory_ceiling;
  return o;
}

Assignment repetition_assignment(const Field& field, const PathInstance& g,
                                 const TestParams& params, int rep) {
  Rng rng(repetition_seed(params.seed, rep));
  return random_assignment(field, g.m(), rng);
}

constexpr std::uint64_t kAttemptTag = 0xA77E;

}  // namespace

Cost desk_isolation_range(const PathInstance& g) { return std::max<Cost>(64, Cost{4} * g.m()); }

Cost full_isolation_range(const PathInstance& g) { return Cost{g.n()} * g.n() * g.m(); }

PerturbedCosts perturb_costs(const PathInstance& g, Cost r, Rng& rng) {
  if (r < 1) throw DomainError("isolation range must be at least 1");
  PerturbedCosts pc;
  pc.r = r;
  pc.m = g.m();
  const __int128 scale = __int128{r} * g.m();
  // Path set totals must stay within 64 bits.
  if (g.m() > 0 && (__int128{g.max_cost()} * scale + r) * g.n() > std::numeric_limits<Cost>::max()) {
    throw DomainError("perturbed costs overflow");
  }
  std::uniform_int_distribution<Cost> pick(1, r);
  pc.weights.resize(g.m());
  pc.perturbed.resize(g.m());
  for (EdgeId e = 0; e < g.m(); ++e) {
    pc.weights[e] = pick(rng);
    pc.perturbed[e] = g.cost(e) * pc.scale() + pc.weights[e];
  }
  return pc;
}

std::optional<PerturbedOptimum> find_min_perturbed_cost(const PathInstance& g,
                                                        const PerturbedCosts& pc,
                                                        const TestParams& params,
                                                        std::optional<Cost> major_limit) {
  if (pc.m != g.m()) throw DomainError("perturbed costs belong to another instance");
  if (!major_limit) {
    major_limit = min_cost_disjoint_paths(g, std::nullopt, params).cost;
    if (!major_limit) return std::nullopt;
  }
  check_field_degree(params.field, *major_limit);
  const Field field(params.field);
  BandedEvaluator ev(g, pc.weights, field, eval_options(params, params.parallelism));
  // A disjoint path set has at most n - k edges.
  const Cost minor_max = pc.r * std::max(1, g.n() - g.k());

  std::optional<PerturbedOptimum> best;
  const int t = params.repetitions_for(g.n());
  for (int rep = 0; rep < t; ++rep) {
    const Assignment f = repetition_assignment(field, g, params, rep);
    if (best) {
      // Only a lexicographically smaller slice can improve on best.
      ev.forward(f, best->major, best->minor);
    } else {
      Cost window = std::min(minor_max, pc.r * g.k());
      for (;;) {
        ev.forward(f, *major_limit, window);
        if (ev.first_nonzero() || window == minor_max) break;
        window = std::min(minor_max, 2 * window);
      }
    }
    if (const auto s = ev.first_nonzero()) {
      const PerturbedOptimum found{s->major, s->minor};
      if (!best || std::pair(found.major, found.minor) < std::pair(best->major, best->minor)) {
        best = found;
      }
    }
  }
  return best;
}

std::vector<bool> classify_edges(const PathInstance& g, const PerturbedCosts& pc,
                                 const PerturbedOptimum& opt, const TestParams& params,
                                 ClassifyMode mode) {
  if (mode == ClassifyMode::kAuto) {
    mode = g.m() <= 64 ? ClassifyMode::kPerEdge : ClassifyMode::kGradient;
  }
  const Field field(params.field);
  const int t = params.repetitions_for(g.n());
  std::vector<bool> essential(g.m(), true);

  if (mode == ClassifyMode::kGradient) {
    // The optimal slice is multilinear (a sum over disjoint path sets), so
    // setting x_e = 0 subtracts exactly x_e times its derivative.
    BandedEvaluator ev(g, pc.weights, field, eval_options(params, params.parallelism));
    const BandedEvaluator::Slice target{opt.major, opt.minor};
    for (int rep = 0; rep < t; ++rep) {
      const Assignment f = repetition_assignment(field, g, params, rep);
      ev.forward(f, opt.major, opt.minor);
      const std::uint64_t value = ev.value(target);
      const auto grad = ev.gradient(target);
      for (EdgeId e = 0; e < g.m(); ++e) {
        if ((value ^ field.mul_raw(f[e], grad[e])) != 0) essential[e] = false;
      }
    }
    return essential;
  }

  const int threads = params.parallelism > 0 ? params.parallelism : omp_get_max_threads();
  std::vector<char> survives(g.m(), 0);
  std::exception_ptr failure;
  for (int rep = 0; rep < t; ++rep) {
    const Assignment f = repetition_assignment(field, g, params, rep);
#pragma omp parallel num_threads(threads)
    {
      BandedEvaluator ev(g, pc.weights, field, eval_options(params, 1));
      Assignment local = f;
#pragma omp for schedule(dynamic, 1)
      for (EdgeId e = 0; e < g.m(); ++e) {
        if (survives[e]) continue;
        try {
          local[e] = 0;
          ev.forward(local, opt.major, opt.minor);
          local[e] = f[e];
          if (ev.first_nonzero()) survives[e] = 1;
        } catch (...) {
#pragma omp critical(smallflow_classify_failure)
          if (!failure) failure = std::current_exception();
        }
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  for (EdgeId e = 0; e < g.m(); ++e) essential[e] = !survives[e];
  return essential;
}

std::string to_string(AssemblyFailure f) {
  switch (f) {
    case AssemblyFailure::kDegree: return "degree";
    case AssemblyFailure::kTerminalReuse: return "terminal reuse";
    case AssemblyFailure::kWrongPathCount: return "wrong path count";
    case AssemblyFailure::kStrayEdges: return "stray edges";
    case AssemblyFailure::kCostMismatch: return "cost mismatch";
  }
  return "unknown";
}

Assembly assemble_paths(const PathInstance& g, const std::vector<bool>& essential,
                        const PerturbedCosts& pc, const PerturbedOptimum& opt) {
  if (static_cast<int>(essential.size()) != g.m() || pc.m != g.m()) {
    throw DomainError("edge classification belongs to another instance");
  }
  auto fail = [](AssemblyFailure kind, std::string detail) {
    return Assembly{std::nullopt, kind, std::move(detail)};
  };
  std::vector<int> in(g.n(), 0), out(g.n(), 0);
  std::vector<EdgeId> next(g.n(), -1);
  int chosen = 0;
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (!essential[e]) continue;
    ++chosen;
    ++out[g.edge(e).from];
    ++in[g.edge(e).to];
    next[g.edge(e).from] = e;
  }
  for (Vertex v = 0; v < g.n(); ++v) {
    const std::string where = "vertex " + std::to_string(v + 1);
    switch (g.role(v)) {
      case Role::kSource:
        if (out[v] > 1) return fail(AssemblyFailure::kTerminalReuse, "source " + where + " starts " +
                                                                         std::to_string(out[v]) + " paths");
        if (in[v] > 0) return fail(AssemblyFailure::kDegree, "source " + where + " has an entering edge");
        break;
      case Role::kSink:
        if (in[v] > 1) return fail(AssemblyFailure::kTerminalReuse, "sink " + where + " ends " +
                                                                        std::to_string(in[v]) + " paths");
        if (out[v] > 0) return fail(AssemblyFailure::kDegree, "sink " + where + " has a leaving edge");
        break;
      case Role::kInner:
        if (in[v] != out[v] || in[v] > 1) {
          return fail(AssemblyFailure::kDegree, where + " touches " + std::to_string(in[v] + out[v]) +
                                                    " essential edges");
        }
        break;
    }
  }

  PathSet ps;
  Cost major = 0, minor = 0;
  int used = 0;
  for (Vertex x : g.sources()) {
    if (out[x] == 0) continue;
    Walk w{x, {}};
    Vertex v = x;
    while (g.role(v) != Role::kSink) {
      const EdgeId e = next[v];
      if (e < 0 || static_cast<int>(w.edges.size()) >= g.n()) {
        return fail(AssemblyFailure::kWrongPathCount, "chain from vertex " + std::to_string(x + 1) +
                                                          " does not reach a sink");
      }
      w.edges.push_back(e);
      major += g.cost(e);
      minor += pc.weights[e];
      v = g.edge(e).to;
    }
    used += static_cast<int>(w.edges.size());
    ps.cost += walk_cost(g, w);
    ps.paths.push_back(std::move(w));
  }
  std::sort(ps.paths.begin(), ps.paths.end(),
            [](const Walk& a, const Walk& b) { return a.start < b.start; });
  if (static_cast<int>(ps.paths.size()) != g.k()) {
    return fail(AssemblyFailure::kWrongPathCount,
                std::to_string(ps.paths.size()) + " paths for k = " + std::to_string(g.k()));
  }
  if (used != chosen) {
    return fail(AssemblyFailure::kStrayEdges,
                std::to_string(chosen - used) + " essential edges lie off the paths");
  }
  if (major != opt.major || minor != opt.minor) {
    return fail(AssemblyFailure::kCostMismatch,
                "perturbed cost " + std::to_string(major * pc.scale() + minor) + " differs from " +
                    std::to_string(opt.total(pc)));
  }
  if (auto bad = path_set_violation(g, ps)) return fail(AssemblyFailure::kDegree, *bad);
  return Assembly{std::move(ps), std::nullopt, {}};
}

ExtractionReport extract_disjoint_paths(const PathInstance& g, const TestParams& params,
                                        const ExtractOptions& options) {
  ExtractionReport report;
  report.r = options.r > 0 ? options.r : desk_isolation_range(g);
  // The length test settles existence far more cheaply than a cost scan.
  if (decide_disjoint_paths(g, g.max_total_length(), params).answer == Answer::kZero) {
    return report;
  }
  report.min_cost = min_cost_disjoint_paths(g, std::nullopt, params).cost;
  if (!report.min_cost) return report;
  const Cost target = *report.min_cost;

  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    AttemptLog log;
    log.seed = derive_seed(params.seed, {kAttemptTag, std::uint64_t(attempt)});
    Rng rng(derive_seed(log.seed, {0}));
    const PerturbedCosts pc = perturb_costs(g, report.r, rng);
    TestParams p = params;
    p.seed = derive_seed(log.seed, {1});

    log.optimum = find_min_perturbed_cost(g, pc, p, target);
    if (!log.optimum) {
      log.outcome = "no nonzero slice up to cost " + std::to_string(target);
    } else if (log.optimum->major != target) {
      log.outcome = "perturbed optimum decodes to cost " + std::to_string(log.optimum->major) +
                    ", expected " + std::to_string(target);
    } else {
      const auto essential = classify_edges(g, pc, *log.optimum, p, options.mode);
      Assembly a = assemble_paths(g, essential, pc, *log.optimum);
      if (a.failure) {
        log.outcome = "assembly failed (" + to_string(*a.failure) + "): " + a.detail;
      } else if (a.paths->cost != target) {
        log.outcome = "paths cost " + std::to_string(a.paths->cost) + ", expected " +
                      std::to_string(target);
      } else {
        log.success = true;
        log.outcome = "ok";
        report.paths = std::move(a.paths);
      }
    }
    report.attempts.push_back(std::move(log));
    if (report.paths) break;
  }
  report.exhausted = !report.paths;
  return report;
}

std::optional<PathSet> find_disjoint_paths(const PathInstance& g, const TestParams& params,
                                           const ExtractOptions& options) {
  ExtractionReport report = extract_disjoint_paths(g, params, options);
  if (report.exhausted) {
    std::string what = "extraction failed after " + std::to_string(report.attempts.size()) +
                       " attempts";
    if (!report.attempts.empty()) what += "; last: " + report.attempts.back().outcome;
    throw ExtractionError(what, std::move(report));
  }
  return std::move(report.paths);
}

}  // namespace smallflow
