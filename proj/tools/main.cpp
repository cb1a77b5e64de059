#include <iostream>
#include <string>
#include <vector>

#include "se2geo/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return se2geo::cli::run(args, std::cout, std::cerr);
}
