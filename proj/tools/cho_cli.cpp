#include <iostream>

#include "cho/cli.hpp"

int main(int argc, char** argv) { return cho::run_cli(argc, argv, std::cout, std::cerr); }
