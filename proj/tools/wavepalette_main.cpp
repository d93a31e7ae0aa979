#include <iostream>
#include <string>
#include <vector>

#include "wavepalette/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wavepalette::run_cli(args, std::cout, std::cerr);
}
