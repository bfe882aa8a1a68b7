#include <iostream>
#include <string>
#include <vector>

#include "aalg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return aalg::run_cli(args, std::cout, std::cerr);
}
