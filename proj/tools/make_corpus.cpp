// Writes the seeded regression corpus used by the CLI tests:
//   make_corpus <dir>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "smallflow/generate.hpp"

using namespace smallflow;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_corpus <dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  for (int i = 0; i < 12; ++i) {
    auto rng = make_rng(0xC0DE, {std::uint64_t(i)});
    generate::PathParams p;
    p.n_max = 7;
    p.max_cost = i % 3 == 0 ? 0 : 4;
    const PathInstance g = generate::random_path_instance(rng, p);
    std::ofstream(dir / ("paths_" + std::to_string(i) + ".paths"))
        << "# seed 0xC0DE/" << i << '\n' << to_paths_text(g);
  }
  for (int i = 0; i < 8; ++i) {
    auto rng = make_rng(0xF10, {std::uint64_t(i)});
    generate::FlowParams p;
    p.n_max = 6;
    const FlowInstance f = generate::random_flow_instance(rng, p);
    std::ofstream(dir / ("flow_" + std::to_string(i) + ".dimacs"))
        << "c seed 0xF10/" << i << '\n' << to_dimacs(f);
  }
}
