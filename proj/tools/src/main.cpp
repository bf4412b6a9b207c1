#include <iostream>
#include <string>
#include <vector>

#include "evo_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return evo::cli::run(args, std::cout, std::cerr);
}
