#include <iostream>

#include "tpi/cli.hpp"

int main(int argc, char** argv) {
  return tpi::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
