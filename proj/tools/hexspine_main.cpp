#include <iostream>

#include "hexspine/cli.hpp"

int main(int argc, char** argv) { return hexspine::run_cli(argc, argv, std::cout, std::cerr); }
