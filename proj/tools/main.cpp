#include <string>
#include <vector>

#include "eealloc/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return eealloc::cli::run(args);
}
