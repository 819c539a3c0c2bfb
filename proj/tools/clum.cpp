#include <iostream>
#include <string>
#include <vector>

#include "clum/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return clum::cli::run(args, std::cout, std::cerr);
}
