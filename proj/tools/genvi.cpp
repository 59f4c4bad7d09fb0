#include <iostream>

#include "genvi/harness/cli.hpp"

int main(int argc, char** argv) { return genvi::harness::run_cli(argc, argv, std::cout, std::cerr); }
