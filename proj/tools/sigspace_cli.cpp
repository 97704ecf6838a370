#include <iostream>

#include "sigspace/cli.hpp"

int main(int argc, char** argv) {
  return sigspace::cli::run(argc, argv, std::cout, std::cerr);
}
