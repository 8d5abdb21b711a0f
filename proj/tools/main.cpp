#include <string>
#include <vector>

#include "elvar/cli_io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return elvar::run_cli(args);
}
