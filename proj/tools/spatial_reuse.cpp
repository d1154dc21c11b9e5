#include <iostream>

#include "spatial/cli.hpp"

int main(int argc, char** argv) {
  return spatial::main_entry(argc, argv, std::cout, std::cerr);
}
