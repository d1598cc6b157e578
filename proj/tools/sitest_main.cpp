#include <iostream>

#include "sitest/cli.hpp"

int main(int argc, char** argv) {
  return sitest::run_cli(argc, argv, std::cout, std::cerr);
}
