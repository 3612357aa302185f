#include <iostream>

#include "corrlab/cli.hpp"

int main(int argc, char** argv) {
  return corrlab::run_cli(argc, argv, std::cout, std::cerr);
}
