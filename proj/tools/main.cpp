#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cli_app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> env_seed;
  if (const char* s = std::getenv(lapgraph::cli::kSeedEnv)) env_seed = s;
  return lapgraph::cli::run(args, std::cout, std::cerr, env_seed);
}
