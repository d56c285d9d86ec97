#include "wfo/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return wfo::cli::run(argc, argv, std::cout, std::cerr); }
