#include <iostream>
#include <string>
#include <vector>

#include "pinnls_cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return pinnls::cli::run(args, std::cout, std::cerr);
}
