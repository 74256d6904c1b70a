#include <iostream>
#include <string>
#include <vector>

#include "chaindiff/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return chaindiff::cli::run_cli(args, std::cout, std::cerr);
}
