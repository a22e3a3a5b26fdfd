#include <iostream>

#include "raildelay/pipeline/cli.hpp"

int main(int argc, char** argv) {
  return raildelay::pipeline::run_cli(argc, argv, std::cout, std::cerr);
}
