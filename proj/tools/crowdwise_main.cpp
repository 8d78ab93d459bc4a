#include <vector>

#include "crowdwise/experiment.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return crowdwise::run_cli(args);
}
