#include <iostream>
#include <string>
#include <vector>

#include "critcat/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return critcat::run_cli(args, std::cout, std::cerr);
}
