#include <iostream>

#include "shockfront/cli.hpp"

int main(int argc, char** argv) {
  return shockfront::cli::run(argc, argv, std::cout, std::cerr);
}
