#include <iostream>

#include "nilgeom/cli/cli.hpp"

int main(int argc, char** argv) {
  return nilgeom::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
