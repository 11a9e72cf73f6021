#include "onebit/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return onebit::cli::run(argc, argv, std::cout, std::cerr); }
