#include <iostream>

#include "scatter1d/cli.hpp"

int main(int argc, char** argv) { return scatter1d::run_cli(argc, argv, std::cout, std::cerr); }
