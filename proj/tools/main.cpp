#include <iostream>
#include <string>
#include <vector>

#include "parsetactic/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return parsetactic::cli::run(args, std::cout, std::cerr);
}
