#include <iostream>

#include "ebl/cli.hpp"

int main(int argc, char** argv) { return ebl::cli::run(argc, argv, std::cout, std::cerr); }
