#include <iostream>
#include <string>
#include <vector>

#include "roydennet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return roydennet::run_cli(args, std::cerr);
}
