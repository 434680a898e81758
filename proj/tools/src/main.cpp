#include <iostream>
#include <string>
#include <vector>

#include "algothermo/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return algothermo::cli::Run(args, std::cout, std::cerr);
}
