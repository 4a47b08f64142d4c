#include <iostream>

#include "repcount/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return repcount::run_cli(args, std::cout, std::cerr);
}
