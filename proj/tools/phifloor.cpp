#include <iostream>

#include "phifloor/cli.hpp"

int main(int argc, char** argv) {
  return phifloor::cli::main_entry(argc, argv, std::cout, std::cerr);
}
