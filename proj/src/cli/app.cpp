#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "smallflow/cli.hpp"
#include "smallflow/decision.hpp"
#include "smallflow/flow.hpp"
#include "smallflow/oracle.hpp"

namespace smallflow::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

// Failures that end a run with a specific exit code.
struct RunFailure : std::runtime_error {
  RunFailure(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw RunFailure(kInputError, "cannot read " + path);
    buf << in.rdbuf();
  }
  return buf.str();
}

bool looks_like_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    return line[pos] == 'p' || line[pos] == 'c';
  }
  return false;
}

const char* command_name(Command c) {
  switch (c) {
    case Command::kDecide: return "decide";
    case Command::kMinCost: return "mincost";
    case Command::kFind: return "find";
    case Command::kFlow: return "flow";
    case Command::kOracle: return "oracle";
    case Command::kBench: return "bench";
  }
  return "?";
}

TestParams test_params(const RunConfig& c) {
  TestParams p;
  p.field = gf2::FieldSpec::standard(static_cast<unsigned>(c.field_exponent));
  p.repetitions = c.repetitions;
  p.seed = c.seed;
  p.parallelism = c.parallelism;
  p.memory_ceiling = c.memory_ceiling;
  return p;
}

Json vertex_path(const Walk& w, const PathInstance& g) {
  Json out = Json::array();
  for (Vertex v : walk_vertices(g, w)) out.push_back(v + 1);
  return out;
}

Json paths_json(const PathSet& ps, const PathInstance& g) {
  Json out = Json::array();
  for (const Walk& w : ps.paths) out.push_back(vertex_path(w, g));
  return out;
}

Json instance_json(const PathInstance& g) {
  return Json{{"n", g.n()}, {"m", g.m()}, {"k", g.k()}, {"max_cost", g.max_cost()}};
}

// Exact optimum by min-cost flow on the vertex-split graph.
std::optional<Cost> oracle_cost(const PathInstance& g) {
  const auto best = oracle::disjoint_paths_by_flow(g);
  if (!best) return std::nullopt;
  return best->value;
}

PathInstance unit_costs(const PathInstance& g) {
  return g.with_costs(std::vector<Cost>(g.m(), 1));
}

void verify(Json& report, const Json& oracle_answer, bool match) {
  report["verify"] = Json{{"oracle", oracle_answer}, {"match", match}};
  if (!match) throw RunFailure(kMismatch, "randomized answer disagrees with the oracle");
}

std::string classify_name(ClassifyMode m) {
  switch (m) {
    case ClassifyMode::kPerEdge: return "per-edge";
    case ClassifyMode::kGradient: return "gradient";
    case ClassifyMode::kAuto: return "auto";
  }
  return "?";
}

// Extraction with the configured isolation range; "auto" tries n^2 m first.
ExtractionReport extract_with_range(const PathInstance& g, const RunConfig& c, Json& report,
                                    Json& deviations) {
  const TestParams params = test_params(c);
  ExtractOptions o;
  o.max_retries = c.max_retries;
  o.mode = c.classify;
  const Cost full = full_isolation_range(g);
  const Cost desk = desk_isolation_range(g);
  const std::string& mode = c.isolation;
  if (mode == "paper" || mode == "auto") {
    o.r = full;
  } else if (mode == "desk") {
    o.r = desk;
  } else {
    try {
      o.r = std::stoll(mode);
    } catch (const std::exception&) {
      throw RunFailure(kInputError, "isolation range must be auto, paper, desk or a number");
    }
    if (o.r < 1) throw RunFailure(kInputError, "isolation range must be at least 1");
  }
  const bool resolved_gradient =
      c.classify == ClassifyMode::kGradient || (c.classify == ClassifyMode::kAuto && g.m() > 64);
  ExtractionReport rep;
  try {
    rep = extract_disjoint_paths(g, params, o);
  } catch (const BudgetError&) {
    if (mode != "auto") throw;
    o.r = desk;
    rep = extract_disjoint_paths(g, params, o);
  }
  if (o.r != full) {
    deviations.push_back("isolation range r = " + std::to_string(o.r) + " instead of n^2 m = " +
                         std::to_string(full) +
                         (mode == "auto" ? " (two-level tables exceeded the memory ceiling)" : ""));
  }
  if (resolved_gradient) {
    deviations.push_back(
        "edges classified by the derivative of the optimal slice instead of one evaluation per edge");
  }
  deviations.push_back("perturbed costs evaluated as (cost, weight) slice pairs");
  report["params"]["r"] = o.r;
  report["params"]["max_retries"] = o.max_retries;
  report["params"]["classify"] = classify_name(c.classify);
  Json attempts = Json::array();
  for (const AttemptLog& a : rep.attempts) {
    Json row{{"seed", a.seed}, {"success", a.success}, {"outcome", a.outcome}};
    if (a.optimum) row["perturbed_optimum"] = {a.optimum->major, a.optimum->minor};
    attempts.push_back(row);
  }
  report["attempts"] = attempts;
  report["retries"] = rep.attempts.empty() ? 0 : int(rep.attempts.size()) - 1;
  return rep;
}

int run_decide(const RunConfig& c, const PathInstance& g, Json& report) {
  const TestParams params = test_params(c);
  Verdict v;
  if (c.cost_bound) {
    report["mode"] = "cost";
    report["bound"] = *c.cost_bound;
    v = decide_cost_bounded(g, *c.cost_bound, params);
  } else {
    const int l = c.length_bound.value_or(g.length_bound().value_or(g.max_total_length()));
    report["mode"] = "length";
    report["bound"] = l;
    v = decide_disjoint_paths(g, l, params);
  }
  const bool yes = v.answer == Answer::kNonzero;
  report["answer"] = yes ? "NONZERO" : "ZERO";
  report["repetitions"] = v.repetitions;
  if (v.witness_repetition) report["witness_repetition"] = *v.witness_repetition;
  if (c.verify) {
    const auto best = c.cost_bound ? oracle_cost(g) : oracle_cost(unit_costs(g));
    const Cost bound = report["bound"].get<Cost>();
    const bool exists = best && *best <= bound;
    verify(report, exists ? "EXISTS" : "NONE", exists == yes);
  }
  return yes ? kAnswered : kAbsent;
}

int run_mincost(const RunConfig& c, const PathInstance& g, Json& report) {
  const MinCostAnswer a = min_cost_disjoint_paths(g, c.cost_ceiling, test_params(c));
  report["ceiling"] = c.cost_ceiling.value_or(default_cost_ceiling(g));
  report["answer"] = a.cost ? "FOUND" : "ABSENT";
  report["cost"] = a.cost ? Json(*a.cost) : Json();
  report["repetitions"] = a.repetitions;
  if (c.verify) {
    const auto best = oracle_cost(g);
    verify(report, best ? Json(*best) : Json(), best == a.cost);
  }
  return a.cost ? kAnswered : kAbsent;
}

int run_find(const RunConfig& c, const PathInstance& g, Json& report, Json& deviations) {
  const ExtractionReport rep = extract_with_range(g, c, report, deviations);
  report["repetitions"] = test_params(c).repetitions_for(g.n());
  if (!rep.min_cost) {
    report["answer"] = "ABSENT";
  } else if (rep.exhausted) {
    report["answer"] = "EXHAUSTED";
  } else {
    report["answer"] = "FOUND";
    report["cost"] = rep.paths->cost;
    report["paths"] = paths_json(*rep.paths, g);
  }
  if (c.verify) {
    const auto best = oracle_cost(g);
    bool match = static_cast<bool>(best) == static_cast<bool>(rep.min_cost);
    if (best && rep.paths) match = match && *best == rep.paths->cost && !path_set_violation(g, *rep.paths);
    verify(report, best ? Json(*best) : Json(), match);
  }
  if (!rep.min_cost) return kAbsent;
  if (rep.exhausted) throw RunFailure(kExhausted, "extraction retries exhausted");
  return kAnswered;
}

int run_flow(const RunConfig& c, const FlowInstance& K, Json& report, Json& deviations) {
  report["instance"] = Json{{"n", K.n}, {"arcs", K.arcs.size()}, {"k", K.k}};
  const flow::GadgetNetwork gadget = flow::build_gadget_network(flow::clamp_capacities(K));
  report["gadget"] = Json{{"n", gadget.network.n()}, {"m", gadget.network.m()}, {"scale", gadget.scale}};
  if (!c.dump_gadget.empty()) {
    std::ofstream dump(c.dump_gadget);
    if (!dump) throw RunFailure(kInputError, "cannot write " + c.dump_gadget);
    dump << to_paths_text(gadget.network);
  }
  const ExtractionReport rep = extract_with_range(gadget.network, c, report, deviations);
  report["repetitions"] = test_params(c).repetitions_for(gadget.network.n());
  std::optional<flow::Flow> f;
  if (rep.paths) {
    f = flow::recover_flow(*rep.paths, gadget, flow::clamp_capacities(K));
    if (auto bad = flow::flow_violation(K, *f)) throw std::logic_error("recovered flow invalid: " + *bad);
    report["answer"] = "FOUND";
    report["cost"] = f->cost;
    report["gadget_cost"] = rep.paths->cost;
    Json rows = Json::array();
    for (std::size_t a = 0; a < K.arcs.size(); ++a) {
      if (f->amount[a] == 0) continue;
      rows.push_back({K.arcs[a].from + 1, K.arcs[a].to + 1, f->amount[a], K.arcs[a].cost});
    }
    report["flow"] = rows;
  } else {
    report["answer"] = rep.min_cost ? "EXHAUSTED" : "ABSENT";
  }
  if (c.verify) {
    const auto classic = oracle::classic_min_cost_flow(K);
    bool match = static_cast<bool>(classic) == static_cast<bool>(rep.min_cost);
    if (classic && f) match = match && classic->cost == f->cost;
    verify(report, classic ? Json(classic->cost) : Json(), match);
  }
  if (!rep.min_cost) return kAbsent;
  if (rep.exhausted) throw RunFailure(kExhausted, "extraction retries exhausted");
  return kAnswered;
}

int run_oracle(const std::string& text, Json& report) {
  if (looks_like_dimacs(text)) {
    const FlowInstance K = parse_dimacs_flow(text);
    report["instance"] = Json{{"n", K.n}, {"arcs", K.arcs.size()}, {"k", K.k}};
    const auto classic = oracle::classic_min_cost_flow(K);
    report["answer"] = classic ? "FOUND" : "ABSENT";
    if (!classic) return kAbsent;
    report["cost"] = classic->cost;
    Json rows = Json::array();
    for (std::size_t a = 0; a < K.arcs.size(); ++a) {
      if (classic->flow[a] == 0) continue;
      rows.push_back({K.arcs[a].from + 1, K.arcs[a].to + 1, classic->flow[a], K.arcs[a].cost});
    }
    report["flow"] = rows;
    return kAnswered;
  }
  const PathInstance g = parse_paths_instance(text);
  report["instance"] = instance_json(g);
  const auto best = oracle::disjoint_paths_by_flow(g);
  report["answer"] = best ? "FOUND" : "ABSENT";
  if (!best) return kAbsent;
  report["cost"] = best->value;
  report["paths"] = paths_json(best->paths, g);
  return kAnswered;
}

void write_text(std::ostream& out, const Json& report) {
  for (const auto& [key, value] : report.items()) {
    out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file) {
      err << "error: cannot write " << c.out << '\n';
      return kInputError;
    }
  }
  std::ostream& sink = c.out.empty() ? out : file;

  if (c.command == Command::kBench) {
    try {
      const auto rows = run_bench(c.sizes, c.degrees, c.seed, c.length_bound, c.memory_ceiling);
      write_bench_csv(sink, rows);
      return kAnswered;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << '\n';
      return kInputError;
    }
  }

  Json report;
  report["schema"] = 1;
  report["command"] = command_name(c.command);
  report["input"] = c.input;
  report["params"] = Json{{"field", "GF(2^" + std::to_string(c.field_exponent) + ")"},
                          {"repetitions", c.repetitions > 0 ? Json(c.repetitions) : Json("auto")},
                          {"seed", c.seed},
                          {"parallelism", c.parallelism},
                          {"memory_ceiling", c.memory_ceiling}};
  Json deviations = Json::array();
  int code = kAnswered;
  try {
    const std::string text = read_input(c.input);
    switch (c.command) {
      case Command::kFlow: {
        if (!looks_like_dimacs(text)) throw RunFailure(kInputError, "flow expects DIMACS input");
        code = run_flow(c, parse_dimacs_flow(text), report, deviations);
        break;
      }
      case Command::kOracle:
        code = run_oracle(text, report);
        break;
      default: {
        if (looks_like_dimacs(text)) {
          throw RunFailure(kInputError, std::string(command_name(c.command)) +
                                            " expects a paths instance, not DIMACS");
        }
        const PathInstance g = parse_paths_instance(text);
        report["instance"] = instance_json(g);
        test_params(c);  // reject a bad field before any work
        if (c.command == Command::kDecide) code = run_decide(c, g, report);
        if (c.command == Command::kMinCost) code = run_mincost(c, g, report);
        if (c.command == Command::kFind) code = run_find(c, g, report, deviations);
        break;
      }
    }
  } catch (const RunFailure& e) {
    code = e.code;
    report["error"] = e.what();
  } catch (const ParseError& e) {
    code = kInputError;
    report["error"] = e.what();
  } catch (const std::invalid_argument& e) {
    code = kInputError;
    report["error"] = e.what();
  } catch (const BudgetError& e) {
    code = kExhausted;
    report["error"] = e.what();
  }
  if (report.contains("error")) err << "error: " << report["error"].get<std::string>() << '\n';
  report["deviations"] = deviations;
  report["exit_code"] = code;
  report["timing"] = Json{{"seconds", std::chrono::duration<double>(Clock::now() - start).count()}};
  if (c.format == Format::kJson) {
    sink << report.dump(2) << '\n';
  } else {
    write_text(sink, report);
  }
  return code;
}

ParseOutcome parse_command_line(int argc, const char* const* argv, std::ostream& out,
                                std::ostream& err) {
  CLI::App app{"Vertex-disjoint paths and min-cost flow by polynomial identity testing"};
  app.require_subcommand(1);
  RunConfig c;
  std::string format = "json", classify = "auto", sizes, degrees;

  auto common = [&](CLI::App* sub) {
    sub->add_option("input", c.input, "instance file, - for stdin")->capture_default_str();
    sub->add_option("-s,--field", c.field_exponent, "field GF(2^s), s in {8, 16, 32, 64}")
        ->capture_default_str();
    sub->add_option("-t,--repetitions", c.repetitions, "repetitions, 0 for max(3, log2 n)")
        ->capture_default_str();
    sub->add_option("--seed", c.seed)->capture_default_str();
    sub->add_option("-j,--parallelism", c.parallelism, "threads, 0 for all")->capture_default_str();
    sub->add_option("--memory", c.memory_ceiling, "table memory ceiling, e.g. 512M")
        ->transform(CLI::AsSizeValue(false))
        ->capture_default_str();
    sub->add_option("--format", format)->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    sub->add_option("-o,--out", c.out, "write the report here instead of stdout");
    sub->add_flag("--verify", c.verify, "cross-check against the exact oracle");
  };
  auto extraction = [&](CLI::App* sub) {
    sub->add_option("--r", c.isolation,
                    "isolation range: auto (n^2 m, desk range if it does not fit), paper, desk "
                    "(max(64, 4m)) or a number")
        ->capture_default_str();
    sub->add_option("--max-retries", c.max_retries)->check(CLI::NonNegativeNumber)->capture_default_str();
    sub->add_option("--classify", classify)
        ->check(CLI::IsMember({"auto", "per-edge", "gradient"}))
        ->capture_default_str();
  };

  auto* decide = app.add_subcommand("decide", "do k disjoint paths exist within the bound");
  common(decide);
  decide->add_option("--l", c.length_bound, "total length bound, default k(n-1)");
  decide->add_option("--u", c.cost_bound, "total cost bound instead of length");
  auto* mincost = app.add_subcommand("mincost", "least total cost of k disjoint paths");
  common(mincost);
  mincost->add_option("--umax", c.cost_ceiling, "cost ceiling, default C n^2");
  auto* find = app.add_subcommand("find", "construct a minimum-cost set of k disjoint paths");
  common(find);
  extraction(find);
  auto* flowcmd = app.add_subcommand("flow", "minimum-cost flow of value k (DIMACS input)");
  common(flowcmd);
  extraction(flowcmd);
  flowcmd->add_option("--dump-gadget", c.dump_gadget, "write the gadget network here");
  auto* oraclecmd = app.add_subcommand("oracle", "exact classical answer for either format");
  common(oraclecmd);
  auto* bench = app.add_subcommand("bench", "time the length decision; CSV output");
  bench->add_option("--sizes", sizes, "n:k:C list, comma separated")->default_str("16:2:1,16:3:1,16:4:1,64:4:1");
  bench->add_option("--degrees", degrees, "thread counts, max for all")->default_str("1,2,4,max");
  bench->add_option("--l", c.length_bound, "length bound, default k(n-1)");
  bench->add_option("--seed", c.seed)->capture_default_str();
  bench->add_option("--memory", c.memory_ceiling)->transform(CLI::AsSizeValue(false));
  bench->add_option("-o,--out", c.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {std::nullopt, code == 0 ? kAnswered : kInputError};
  }
  if (decide->parsed()) c.command = Command::kDecide;
  if (mincost->parsed()) c.command = Command::kMinCost;
  if (find->parsed()) c.command = Command::kFind;
  if (flowcmd->parsed()) c.command = Command::kFlow;
  if (oraclecmd->parsed()) c.command = Command::kOracle;
  if (bench->parsed()) c.command = Command::kBench;
  c.format = format == "text" ? Format::kText : Format::kJson;
  c.classify = classify == "per-edge"   ? ClassifyMode::kPerEdge
               : classify == "gradient" ? ClassifyMode::kGradient
                                        : ClassifyMode::kAuto;
  if (c.length_bound && c.cost_bound) {
    err << "error: --l and --u are exclusive\n";
    return {std::nullopt, kInputError};
  }

  if (c.command == Command::kBench) {
    try {
      std::string spec = sizes.empty() ? "16:2:1,16:3:1,16:4:1,64:4:1" : sizes;
      for (const auto& item : CLI::detail::split(spec, ',')) {
        const auto parts = CLI::detail::split(item, ':');
        if (parts.size() != 3) throw std::invalid_argument(item);
        c.sizes.push_back({std::stoi(parts[0]), std::stoi(parts[1]), std::stoll(parts[2])});
      }
      std::string deg = degrees.empty() ? "1,2,4,max" : degrees;
      for (const auto& item : CLI::detail::split(deg, ',')) {
        c.degrees.push_back(item == "max" ? 0 : std::stoi(item));
      }
    } catch (const std::exception& e) {
      err << "error: bad bench list entry " << e.what() << '\n';
      return {std::nullopt, kInputError};
    }
  }
  return {c, kAnswered};
}

}  // namespace smallflow::cli
