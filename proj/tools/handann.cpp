#include <iostream>
#include <string>
#include <vector>

#include "handann/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return handann::cli_dispatch(args, std::cout, std::cerr);
}
