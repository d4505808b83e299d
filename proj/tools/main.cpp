#include <iostream>

#include "alfven_cli/commands.hpp"

int main(int argc, char** argv) { return alfven::cli::run(argc, argv, std::cout, std::cerr); }
