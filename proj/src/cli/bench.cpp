#include <omp.h>

#include <chrono>
#include <ostream>

#include "smallflow/cli.hpp"
#include "smallflow/evaluator.hpp"
#include "smallflow/generate.hpp"

namespace smallflow::cli {

std::vector<BenchRow> run_bench(const std::vector<BenchSize>& sizes, const std::vector<int>& degrees,
                                std::uint64_t seed, std::optional<int> length_bound,
                                std::size_t memory_ceiling) {
  const Field field;
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const BenchSize& size = sizes[i];
    if (size.k < 1 || size.n < 2 * size.k + 1 || size.max_cost < 1) {
      throw std::invalid_argument("bench size needs n > 2k, k >= 1, C >= 1");
    }
    auto rng = make_rng(seed, {i});
    const PathInstance g = generate::layered_instance(rng, size.n, size.k, 3, size.max_cost);
    const Assignment f = random_assignment(field, g.m(), rng);
    const int l = length_bound.value_or(g.max_total_length());

    double base = 0;
    std::optional<std::uint64_t> reference;
    auto measure = [&](int degree) {
      BenchRow row;
      row.size = size;
      row.degree = degree > 0 ? degree : omp_get_max_threads();
      EvalOptions o;
      o.parallelism = row.degree;
      o.memory_ceiling = memory_ceiling;
      EvalStats stats;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        const FieldElement v = eval_length_bounded_par(g, l, f, field, o, &stats);
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        row.answer = v.is_zero() ? "ZERO" : "NONZERO";
        row.status = "ok";
        if (reference && *reference != v.bits) row.status = "mismatch";
        if (!reference) reference = v.bits;
        row.subset_cells = stats.subset_cells;
        row.pair_cells = stats.pair_cells;
      } catch (const BudgetError&) {
        row.status = "budget";
      }
      return row;
    };
    const BenchRow one = measure(1);
    base = one.seconds;
    for (int d : degrees) {
      BenchRow row = d == 1 ? one : measure(d);
      if (row.status == "ok" && row.seconds > 0) row.speedup = base / row.seconds;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "n,k,C,degree,seconds,pair_cells,subset_cells,speedup,answer,status\n";
  for (const BenchRow& r : rows) {
    out << r.size.n << ',' << r.size.k << ',' << r.size.max_cost << ',' << r.degree << ','
        << r.seconds << ',' << r.pair_cells << ',' << r.subset_cells << ',' << r.speedup << ','
        << r.answer << ',' << r.status << '\n';
  }
}

}  // namespace smallflow::cli
