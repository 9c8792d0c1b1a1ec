#include <string>
#include <vector>

#include "nightseg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nightseg::cli::run(args);
}
