#include <iostream>

#include "vortlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vortlab::cli::run(args, std::cout, std::cerr);
}
