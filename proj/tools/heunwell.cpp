#include <iostream>

#include "heunwell/cli.hpp"

int main(int argc, char** argv) {
  return heunwell::cli::run(argc, argv, std::cout, std::cerr);
}
