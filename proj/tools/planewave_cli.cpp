#include <iostream>

#include "planewave/cli.hpp"

int main(int argc, char** argv) { return planewave::cli::run(argc, argv, std::cout, std::cerr); }
