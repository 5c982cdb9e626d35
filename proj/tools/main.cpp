#include "trobust/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return trobust::cli::main(argc, argv, std::cout, std::cerr); }
