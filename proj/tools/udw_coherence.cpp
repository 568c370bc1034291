#include <iostream>

#include "udw/cli/run.hpp"

int main(int argc, char** argv) {
  return udw::cli::main_entry(argc, argv, std::cout, std::cerr);
}
