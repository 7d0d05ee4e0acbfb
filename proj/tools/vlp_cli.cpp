#include <iostream>
#include <string>
#include <vector>

#include "vlp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vlp::run(args, std::cout, std::cerr);
}
