#include <iostream>

#include "couette/cli.hpp"

int main(int argc, char** argv) { return couette::cli_main(argc, argv, std::cout, std::cerr); }
