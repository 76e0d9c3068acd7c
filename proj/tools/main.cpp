#include <iostream>

#include "testprio/cli.hpp"

int main(int argc, char** argv) {
  return testprio::cli::run(argc, argv, std::cout, std::cerr);
}
