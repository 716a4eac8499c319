#include <iostream>
#include <string>
#include <vector>

#include "hamext/cli.hpp"

int main(int argc, char** argv) {
  return hamext::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
