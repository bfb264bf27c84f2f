#include <iostream>

#include "pconf/cli.hpp"

int main(int argc, char** argv) { return pconf::run_cli(argc, argv, std::cout, std::cerr); }
