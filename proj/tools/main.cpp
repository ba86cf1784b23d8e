#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return ocular::cli::cli_main(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
