// Acceptance battery. One PASS/FAIL line per criterion; exit status 0 iff
// every selected criterion passes.
//   acceptance [--criterion N]...
#include <omp.h>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include "smallflow/decision.hpp"
#include "smallflow/evaluator.hpp"
#include "smallflow/extraction.hpp"
#include "smallflow/flow.hpp"
#include "smallflow/generate.hpp"
#include "smallflow/oracle.hpp"

using namespace smallflow;
using oracle::BoundMode;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Shared battery for criteria 1 and 2.
std::vector<PathInstance> small_instances() {
  std::vector<PathInstance> out;
  generate::PathParams p;
  p.n_max = 6;
  p.k_max = 3;
  // Dense enough that most instances carry intersecting walk sets.
  p.density_min = 0.35;
  p.density_max = 0.7;
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = make_rng(1001, {i});
    out.push_back(generate::random_path_instance(rng, p));
  }
  return out;
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  int exceptions = 0, feasible = 0;
  for (const auto& g : small_instances()) {
    const auto poly = oracle::symbolic_char2_polynomial(
        g, {BoundMode::kLengthAtMost, g.max_total_length()});
    const bool exists = oracle::brute_force_disjoint_paths(g, oracle::Objective::kLength).has_value();
    feasible += exists;
    exceptions += (!poly.empty()) != exists;
  }
  const double secs = since(t0);
  return {exceptions == 0 && secs < 60,
          fmt("200 instances (%d feasible), %d exceptions, %.1f s; need 0 and < 60 s", feasible,
              exceptions, secs)};
}

Outcome criterion2() {
  long sets = 0, bad = 0, bad_simple = 0, simple = 0;
  std::map<std::string, long> kinds;
  for (const auto& g : small_instances()) {
    oracle::enumerate_proper_walk_sets(
        g, {BoundMode::kLengthAtMost, g.max_total_length()}, [&](const ProperWalkSet& s) {
          ++sets;
          const ProperWalkSet t = oracle::apply_phi(g, s);
          const auto sig = oracle::signature(g, s);
          std::string why;
          if (oracle::apply_phi(g, t) != s) why = "not an involution";
          else if (oracle::signature(g, t) != sig) why = "signature changed";
          else if (total_length(t) != total_length(s)) why = "length changed";
          else if (sig && t == s) why = "fixed point";
          else if (oracle::monomial_of(t) != oracle::monomial_of(s)) why = "monomial changed";
          const bool is_simple = oracle::walks_simple(g, s);
          simple += is_simple;
          if (why.empty()) return;
          ++bad;
          ++kinds[why];
          bad_simple += is_simple;
        });
  }
  std::string breakdown;
  for (const auto& [k, v] : kinds) breakdown += fmt(", %s %ld", k.c_str(), v);
  return {bad == 0, fmt("%ld proper walk sets, %ld exceptions%s; restricted to simple walks: %ld "
                        "of %ld; need 0",
                        sets, bad, breakdown.c_str(), bad_simple, simple)};
}

Outcome criterion3() {
  const auto t0 = Clock::now();
  const Field field;
  int bad_a = 0, bad_b = 0, bad_c = 0;

  generate::PathParams p;
  p.n_max = 8;
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = make_rng(3001, {i});
    const auto g = generate::random_path_instance(rng, p);
    for (int a = 0; a < 5; ++a) {
      const auto f = random_assignment(field, g.m(), rng);
      const int l = g.max_total_length();
      const auto seq = eval_length_bounded_seq(g, l, f, field);
      for (int threads : {2, 4}) {
        bad_a += eval_length_bounded_par(g, l, f, field, {threads}) != seq;
      }
    }
  }

  p.n_max = 7;
  p.max_cost = 4;
  int costed = 0;
  for (std::uint64_t i = 0; costed < 100; ++i) {
    auto rng = make_rng(3002, {i});
    const auto g = generate::random_path_instance(rng, p);
    const Cost total = std::accumulate(g.costs().begin(), g.costs().end(), Cost{0});
    if (total > 40 || total < g.k()) continue;
    ++costed;
    const auto s = subdivide_costs(g);
    const auto f = random_assignment(field, g.m(), rng);
    const int bound = std::min<int>(static_cast<int>(total), s.instance.max_total_length());
    if (bound < g.k()) continue;
    const auto implicit = eval_cost_slices(g, bound, f, field);
    const auto explicit_ = eval_length_slices(s.instance, bound, carry_assignment(s, f), field);
    bad_b += implicit.values != explicit_.values;
  }

  p.n_max = 6;
  p.max_cost = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    auto rng = make_rng(3003, {i});
    const auto g = generate::random_path_instance(rng, p);
    const int l = g.max_total_length();
    const auto poly = oracle::symbolic_char2_polynomial(g, {BoundMode::kLengthAtMost, l});
    for (int a = 0; a < 25; ++a) {
      const auto f = random_assignment(field, g.m(), rng);
      bad_c += eval_length_bounded_seq(g, l, f, field) != poly.evaluate(f, field);
    }
  }
  const double secs = since(t0);
  return {bad_a + bad_b + bad_c == 0 && secs < 120,
          fmt("(a) seq vs par 200x5 at 2 and 4 threads: %d, (b) implicit vs explicit "
              "subdivision 100: %d, (c) vs symbolic 50x25: %d exceptions, %.1f s; need 0 and "
              "< 120 s",
              bad_a, bad_b, bad_c, secs)};
}

Outcome criterion4() {
  TestParams params;
  params.repetitions = 3;
  generate::PathParams p;
  p.n_max = 8;
  p.k_max = 3;
  p.max_cost = 5;
  int mismatches = 0, feasible = 0, false_nonzero = 0;
  double worst_bound = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    auto rng = make_rng(4001, {i});
    const auto g = generate::random_path_instance(rng, p);
    params.seed = derive_seed(4002, {i});
    const auto opt = oracle::brute_force_disjoint_paths(g, oracle::Objective::kCost);
    feasible += opt.has_value();

    const int l = g.max_total_length();
    const Verdict v = decide_disjoint_paths(g, l, params);
    const bool nonzero = v.answer == Answer::kNonzero;
    mismatches += nonzero != opt.has_value();
    false_nonzero += nonzero && !opt;

    const MinCostAnswer mc = min_cost_disjoint_paths(g, std::nullopt, params);
    mismatches += mc.cost.has_value() != opt.has_value();
    if (mc.cost && opt) mismatches += *mc.cost != opt->value;

    // Schwartz-Zippel: a zero verdict on a nonzero polynomial of degree d
    // happens with probability at most (d / 2^64)^t.
    const double d = static_cast<double>(std::max<std::int64_t>(l, default_cost_ceiling(g)));
    worst_bound = std::max(worst_bound, std::pow(d / 18446744073709551616.0, 3));
  }
  return {mismatches == 0 && false_nonzero == 0 && worst_bound < 1e-9,
          fmt("500 instances (%d feasible), GF(2^64), t = 3: %d mismatches, %d NONZERO without "
              "oracle solution, per-query failure bound %.1e; need 0, 0, < 1e-9",
              feasible, mismatches, false_nonzero, worst_bound)};
}

Outcome criterion5() {
  generate::PathParams p;
  p.n_max = 8;
  p.k_max = 3;
  p.max_cost = 4;
  ExtractOptions opts;
  opts.max_retries = 3;
  int feasible = 0, solved = 0, attempts = 0, successes = 0;
  double expected = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = make_rng(5001, {i});
    const auto g = generate::random_path_instance(rng, p);
    TestParams params;
    params.seed = derive_seed(5002, {i});
    const auto opt = oracle::brute_force_disjoint_paths(g, oracle::Objective::kCost);
    const ExtractionReport rep = extract_disjoint_paths(g, params, opts);
    if (!opt) continue;
    ++feasible;
    if (rep.paths && !path_set_violation(g, *rep.paths) && rep.paths->cost == opt->value) ++solved;
    for (const auto& a : rep.attempts) {
      ++attempts;
      successes += a.success;
      expected += 1.0 - static_cast<double>(g.m()) / static_cast<double>(rep.r);
    }
  }
  const double rate = attempts ? double(successes) / attempts : 0;
  const double need = attempts ? expected / attempts - 0.05 : 1;
  return {solved == feasible && rate >= need,
          fmt("100 runs, desk r, <= 3 retries: %d of %d feasible solved at oracle cost; "
              "per-attempt success %d/%d = %.3f; need all and >= mean(1 - m/r) - 0.05 = %.3f",
              solved, feasible, successes, attempts, rate, need)};
}

Outcome criterion6() {
  const auto t0 = Clock::now();
  int reduction_bad = 0, end_to_end_bad = 0, feasible = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = make_rng(6001, {i});
    const FlowInstance K = generate::random_flow_instance(rng, {});
    const auto classic = oracle::classic_min_cost_flow(K);
    feasible += classic.has_value();

    const auto gadget = flow::build_gadget_network(flow::clamp_capacities(K));
    const auto star = oracle::disjoint_paths_by_flow(gadget.network);
    if (classic.has_value() != star.has_value()) {
      ++reduction_bad;
    } else if (classic) {
      const Cost residue = star->value % gadget.scale;
      reduction_bad += flow::extract_cost(star->value, gadget.scale) != classic->cost;
      reduction_bad += star->value / gadget.scale != classic->cost;
      reduction_bad += residue < 0 || residue >= gadget.scale;
    }

    TestParams params;
    params.seed = derive_seed(6002, {i});
    try {
      const auto result = flow::min_cost_flow(K, params);
      if (result.has_value() != classic.has_value()) {
        ++end_to_end_bad;
      } else if (result) {
        end_to_end_bad += result->cost != classic->cost;
        end_to_end_bad += !flow::validate_flow(K, result->flow);
        end_to_end_bad += result->flow.cost != classic->cost;
      }
    } catch (const ExtractionError&) {
      ++end_to_end_bad;
    }
  }
  const double secs = since(t0);
  return {reduction_bad + end_to_end_bad == 0 && secs < 300,
          fmt("200 flow instances (%d feasible): reduction %d, end-to-end %d exceptions, "
              "%.1f s; need 0 and < 300 s",
              feasible, reduction_bad, end_to_end_bad, secs)};
}

Outcome criterion7() {
  const Field field;
  // Cell counts at a fixed bound, k = 1..5.
  std::vector<std::uint64_t> cells;
  for (int k = 1; k <= 5; ++k) {
    auto rng = make_rng(7001, {std::uint64_t(k)});
    const auto g = generate::layered_instance(rng, 64, k, 3);
    const auto f = random_assignment(field, g.m(), rng);
    EvalStats stats;
    eval_length_bounded_par(g, 60, f, field, {1}, &stats);
    cells.push_back(stats.subset_cells);
  }
  bool doubling = true;
  for (std::size_t i = 1; i < cells.size(); ++i) doubling &= cells[i] == 2 * cells[i - 1];

  auto rng = make_rng(7002);
  const auto g = generate::layered_instance(rng, 64, 4, 3);
  const auto f = random_assignment(field, g.m(), rng);
  const int l = g.max_total_length();
  auto best_of = [&](int threads, FieldElement& value) {
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = Clock::now();
      value = eval_length_bounded_par(g, l, f, field, {threads});
      best = std::min(best, since(t0));
    }
    return best;
  };
  const int degree = std::max(4, omp_get_max_threads());
  FieldElement v1, vd;
  const double t1 = best_of(1, v1);
  const double td = best_of(degree, vd);
  const double speedup = t1 / td;
  std::string counts;
  for (auto c : cells) counts += (counts.empty() ? "" : " ") + std::to_string(c);
  return {doubling && v1 == vd && speedup >= 1.5,
          fmt("subset cells k=1..5 at l=60: %s (exact doubling: %s); n=64 k=4 degree %d vs 1: "
              "outputs %s, speedup %.2fx on %d hardware threads; need exact doubling, identical, "
              ">= 1.5x",
              counts.c_str(), doubling ? "yes" : "no", degree, v1 == vd ? "identical" : "differ",
              speedup, omp_get_num_procs())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance battery"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "run only these criteria")->check(CLI::Range(1, 7));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7};

  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7};
  bool all = true;
  for (int c : selected) {
    Outcome o{false, ""};
    try {
      o = criteria[c - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    all &= o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c << ": " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
