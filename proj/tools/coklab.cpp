#include <iostream>

#include "coklab/cli.hpp"

int main(int argc, char** argv) { return coklab::run_cli(argc, argv, std::cout, std::cerr); }
