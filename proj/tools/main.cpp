#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  watt::cli::Options options;
  options.styled = ::isatty(STDOUT_FILENO) != 0 && std::getenv("WATT_NO_COLOR") == nullptr;
  return watt::cli::run(args, std::cout, std::cerr, options);
}
