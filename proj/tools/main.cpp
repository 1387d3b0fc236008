#include <iostream>

#include "pinwheel/cli.hpp"

int main(int argc, char** argv) { return pinwheel::run_cli(argc, argv, std::cout, std::cerr); }
