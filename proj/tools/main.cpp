#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return hwip::cli::main_entry(std::vector<std::string>(argv, argv + argc), hwip::cli::Environment::from_process(),
                               std::cout, std::cerr);
}
