#include <iostream>

#include "handoff/cli.hpp"

int main(int argc, char** argv) {
  return handoff::cli::run(argc, argv, std::cout, std::cerr);
}
