#include <iostream>

#include "quasilat/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return quasilat::cli::run(args, std::cout, std::cerr);
}
