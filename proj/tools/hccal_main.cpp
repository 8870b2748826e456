#include <iostream>
#include <string>
#include <vector>

#include "hccal/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return hccal::cli::run(args, std::cout, std::cerr);
}
