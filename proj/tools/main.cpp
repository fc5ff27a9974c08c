#include <iostream>
#include <string>
#include <vector>

#include "gauge_graph/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gauge_graph::run_cli(args, std::cout, std::cerr);
}
