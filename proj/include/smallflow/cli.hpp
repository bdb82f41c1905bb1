#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smallflow/errors.hpp"
#include "smallflow/extraction.hpp"
#include "smallflow/network.hpp"

namespace smallflow::cli {

enum ExitCode {
  kAnswered = 0,
  kAbsent = 1,  // infeasible, ZERO or no flow of value k
  kInputError = 2,
  kExhausted = 3,  // memory budget or extraction retries
  kMismatch = 4,   // --verify disagreed with the randomized answer
};

enum class Command { kDecide, kMinCost, kFind, kFlow, kOracle, kBench };
enum class Format { kJson, kText };

struct BenchSize {
  int n;
  int k;
  Cost max_cost;
};

struct RunConfig {
  Command command = Command::kDecide;
  std::string input = "-";
  std::string out;  // empty writes to stdout
  int field_exponent = 64;
  int repetitions = 0;
  std::uint64_t seed = 1;
  // "auto" (n^2 m, falling back to the desk range when the tables do not
  // fit), "paper", "desk" or a number.
  std::string isolation = "auto";
  int max_retries = 3;
  int parallelism = 1;
  std::size_t memory_ceiling = kDefaultMemoryCeiling;
  Format format = Format::kJson;
  bool verify = false;
  ClassifyMode classify = ClassifyMode::kAuto;
  std::optional<int> length_bound;
  std::optional<Cost> cost_bound;
  std::optional<Cost> cost_ceiling;
  std::string dump_gadget;

  std::vector<BenchSize> sizes;
  std::vector<int> degrees;  // 0 stands for the OpenMP maximum
};

// Parses argv. Returns the config, or the exit code when parsing ended the
// run (--help, or a usage error already reported on err).
struct ParseOutcome {
  std::optional<RunConfig> config;
  int exit_code = kAnswered;
};
ParseOutcome parse_command_line(int argc, const char* const* argv, std::ostream& out,
                                std::ostream& err);

// Runs one pipeline and writes its report (JSON, text or CSV for bench).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

struct BenchRow {
  BenchSize size;
  int degree;  // threads actually used
  double seconds = 0;
  std::uint64_t pair_cells = 0;
  std::uint64_t subset_cells = 0;
  double speedup = 0;  // against degree 1 on the same size
  std::string answer;
  std::string status;  // "ok" or "budget"
};

// Length decision at l = k(n-1) (or `length_bound`) on a seeded layered
// instance per size, timed at every degree.
std::vector<BenchRow> run_bench(const std::vector<BenchSize>& sizes, const std::vector<int>& degrees,
                                std::uint64_t seed, std::optional<int> length_bound,
                                std::size_t memory_ceiling);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace smallflow::cli
