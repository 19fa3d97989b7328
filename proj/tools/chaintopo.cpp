#include <iostream>
#include <string>
#include <vector>

#include "chaintopo/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return chaintopo::cli::run(args, std::cout, std::cerr);
}
