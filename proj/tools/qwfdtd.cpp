#include <iostream>
#include <string>
#include <vector>

#include "qwfdtd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qwfdtd::cli::run_command(args, std::cout, std::cerr);
}
