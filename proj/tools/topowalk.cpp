#include <iostream>
#include <string>
#include <vector>

#include "topowalk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return topowalk::cli::run(args, std::cout, std::cerr);
}
