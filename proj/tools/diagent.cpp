#include <iostream>
#include <string>
#include <vector>

#include "diagent/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return diagent::cli::run(args, std::cout, std::cerr);
}
