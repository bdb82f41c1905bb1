#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "smallflow/cli.hpp"

using namespace smallflow::cli;
using Json = nlohmann::ordered_json;

namespace {

const std::filesystem::path kData = SMALLFLOW_TEST_DATA;
const std::filesystem::path kCorpus = SMALLFLOW_TEST_CORPUS;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "smallflow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const auto parsed = parse_command_line(int(argv.size()), argv.data(), out, err);
  if (!parsed.config) return {parsed.exit_code, out.str(), err.str()};
  const int code = run(*parsed.config, out, err);
  return {code, out.str(), err.str()};
}

Json report(const Invocation& r) { return Json::parse(r.out); }

std::string data(const char* name) { return (kData / name).string(); }

}  // namespace

TEST_CASE("decide --l 2 on the 2x2 bipartite file") {
  const auto r = invoke({"decide", "--l", "2", data("bipartite_2x2.paths")});
  CHECK(r.code == 0);
  const Json j = report(r);
  CHECK(j["schema"] == 1);
  CHECK(j["answer"] == "NONZERO");
  CHECK(j["exit_code"] == 0);
}

TEST_CASE("flow --verify on the two-route DIMACS file") {
  const auto r = invoke({"flow", "--verify", data("two_route.dimacs")});
  CHECK(r.code == 0);
  const Json j = report(r);
  CHECK(j["cost"] == 4);
  CHECK(j["verify"]["oracle"] == 4);
  CHECK(j["verify"]["match"] == true);
  REQUIRE(j["flow"].size() == 4);
  for (const auto& row : j["flow"]) CHECK(row.size() == 4);
}

TEST_CASE("malformed input reports the line and exits 2") {
  const auto r = invoke({"decide", data("malformed.paths")});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 5") != std::string::npos);
  CHECK(report(r)["error"].get<std::string>().find("line 5") != std::string::npos);
}

TEST_CASE("missing file and wrong format are input errors") {
  CHECK(invoke({"decide", (kData / "no_such_file").string()}).code == 2);
  CHECK(invoke({"flow", data("bipartite_2x2.paths")}).code == 2);
  CHECK(invoke({"find", data("two_route.dimacs")}).code == 2);
}

TEST_CASE("bad flags are rejected before dispatch") {
  CHECK(invoke({"decide", "--format", "xml", data("bipartite_2x2.paths")}).code == 2);
  CHECK(invoke({"find", "--classify", "guess", data("bipartite_2x2.paths")}).code == 2);
  CHECK(invoke({"bench", "--sizes", "8:x:2"}).code == 2);
  CHECK(invoke({}).code == 2);
  // A bound outside [1, k(n-1)] is a domain error of the request.
  CHECK(invoke({"decide", "--l", "99", data("bipartite_2x2.paths")}).code == 2);
}

TEST_CASE("infeasible instances exit 1") {
  // Oracle-confirmed: no two disjoint paths in this corpus instance.
  const std::string file = (kCorpus / "paths_6.paths").string();
  CHECK(report(invoke({"decide", file}))["answer"] == "ZERO");
  const auto r = invoke({"mincost", file});
  CHECK(r.code == 1);
  CHECK(report(r)["answer"] == "ABSENT");
  // A ceiling below k cannot be met by any k paths; that is a bad request.
  CHECK(invoke({"mincost", "--umax", "1", data("bipartite_2x2.paths")}).code == 2);
}

TEST_CASE("text format carries the same fields") {
  const auto r = invoke({"mincost", "--format", "text", data("bipartite_2x2.paths")});
  CHECK(r.code == 0);
  CHECK(r.out.find("answer: FOUND") != std::string::npos);
  CHECK(r.out.find("cost: 2") != std::string::npos);
}

TEST_CASE("same config and seed give byte-identical reports apart from timing") {
  for (const char* cmd : {"decide", "mincost", "find"}) {
    for (const char* file : {"paths_2.paths", "paths_8.paths", "paths_6.paths"}) {
      const std::vector<std::string> args = {cmd, "--seed", "17", "--verify",
                                             (kCorpus / file).string()};
      Json a = report(invoke(args));
      Json b = report(invoke(args));
      a.erase("timing");
      b.erase("timing");
      CHECK(a.dump() == b.dump());
    }
  }
  // Desk isolation range: the n^2 m range gives the same report, slowly.
  std::vector<std::string> args = {"flow", "--seed", "5", "--r", "desk",
                                   (kCorpus / "flow_2.dimacs").string()};
  Json a = report(invoke(args));
  Json b = report(invoke(args));
  a.erase("timing");
  b.erase("timing");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("--out writes the report to a file") {
  const auto path = std::filesystem::temp_directory_path() / "smallflow_cli_out.json";
  std::filesystem::remove(path);
  const auto r = invoke({"find", "-o", path.string(), data("bipartite_2x2.paths")});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const Json j = Json::parse(in);
  CHECK(j["paths"].size() == 2);
  std::filesystem::remove(path);
}

TEST_CASE("--dump-gadget writes a reparsable paths instance") {
  const auto path = std::filesystem::temp_directory_path() / "smallflow_gadget.paths";
  const auto r = invoke({"flow", "--dump-gadget", path.string(), data("two_route.dimacs")});
  CHECK(r.code == 0);
  const auto again = invoke({"oracle", path.string()});
  CHECK(again.code == 0);
  CHECK(report(again)["cost"] == report(r)["gadget_cost"]);
  std::filesystem::remove(path);
}

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("bench CSV reparses with one row per size and degree") {
  const auto r = invoke({"bench", "--sizes", "10:2:3,12:3:2", "--degrees", "1,2,4,max"});
  CHECK(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 1 + 2 * 4);
  CHECK(rows[0].size() == 10);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 10);
    CHECK(rows[i][9] == "ok");
  }
  // Same size, every degree: same answer.
  for (std::size_t i = 1; i <= 4; ++i) CHECK(rows[i][8] == rows[1][8]);
}

TEST_CASE("bench subset cells double per unit of k at a fixed bound") {
  const auto r = invoke({"bench", "--sizes", "16:1:1,16:2:1,16:3:1,16:4:1", "--degrees", "1",
                         "--l", "12"});
  CHECK(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 2; i < rows.size(); ++i) {
    CHECK(std::stoull(rows[i][6]) == 2 * std::stoull(rows[i - 1][6]));
  }
}

TEST_CASE("bench marks budget rows without failing") {
  const auto r = invoke({"bench", "--sizes", "10:2:3", "--degrees", "1,2", "--memory", "1"});
  CHECK(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][9] == "budget");
  CHECK(rows[2][9] == "budget");
}

TEST_CASE("--verify never mismatches across the regression corpus") {
  int checked = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kCorpus)) {
    const std::string file = entry.path().string();
    std::vector<const char*> commands = {"flow"};
    if (entry.path().extension() == ".paths") commands = {"decide", "mincost", "find"};
    for (const char* cmd : commands) {
      CAPTURE(file);
      CAPTURE(cmd);
      const auto r = invoke({cmd, "--verify", file});
      CHECK((r.code == 0 || r.code == 1));
      const Json j = report(r);
      CHECK(j["verify"]["match"] == true);
      ++checked;
    }
  }
  CHECK(checked == 12 * 3 + 8);
}
