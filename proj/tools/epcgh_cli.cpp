#include <iostream>
#include <string>
#include <vector>

#include "epcgh/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return epcgh::run_cli(args, std::cout, std::cerr);
}
