#include <iostream>
#include <string>
#include <vector>

#include "orthostab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return orthostab::cli::run(args, std::cout, std::cerr);
}
