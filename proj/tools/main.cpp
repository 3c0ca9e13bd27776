#include <iostream>

#include "hexdimer/cli.hpp"

int main(int argc, char** argv) { return hexdimer::cli::run(argc, argv, std::cout, std::cerr); }
