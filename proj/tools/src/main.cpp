#include <iostream>

#include "ptdirac/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return ptdirac::cli::run(args, std::cout, std::cerr);
}
