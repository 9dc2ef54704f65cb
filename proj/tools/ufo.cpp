#include <iostream>
#include <string>
#include <vector>

#include "ufo_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ufo::cli::run(std::move(args), std::cout, std::cerr);
}
