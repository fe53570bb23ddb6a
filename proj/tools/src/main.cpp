#include <iostream>

#include "profscreen/cli/commands.hpp"

int main(int argc, char** argv) {
  return profscreen::cli::run_cli(argc, argv, std::cout, std::cerr);
}
