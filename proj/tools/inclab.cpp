#include <iostream>
#include <string>
#include <vector>

#include "inclab/experiments.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return inclab::cli_dispatch(args, std::cout, std::cerr);
}
