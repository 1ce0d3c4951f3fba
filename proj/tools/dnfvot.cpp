#include <iostream>
#include <string>
#include <vector>

#include "dnf/cli.hpp"

int main(int argc, char** argv) {
  return dnf::cli_main(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
