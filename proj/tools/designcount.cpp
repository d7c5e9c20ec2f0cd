#include <iostream>

#include "designcount/cli.hpp"

int main(int argc, char** argv) { return designcount::run_cli(argc, argv, std::cout, std::cerr); }
