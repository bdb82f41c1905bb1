#include <iostream>

#include "smallflow/cli.hpp"

int main(int argc, char** argv) {
  auto parsed = smallflow::cli::parse_command_line(argc, argv, std::cout, std::cerr);
  if (!parsed.config) return parsed.exit_code;
  return smallflow::cli::run(*parsed.config, std::cout, std::cerr);
}
