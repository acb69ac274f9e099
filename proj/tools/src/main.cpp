#include <iostream>

#include "pwaves_cli/commands.hpp"

int main(int argc, char** argv) { return pwaves::cli::run(argc, argv, std::cout, std::cerr); }
