#include <iostream>

#include "polyaforge/cli.hpp"

int main(int argc, char** argv) { return polyaforge::run_cli(argc, argv, std::cout, std::cerr); }
