#include <iostream>

#include "lipeval/cli.hpp"

int main(int argc, char** argv) {
  return lipeval::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
