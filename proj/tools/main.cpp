#include <iostream>

#include "beliefnet/cli.hpp"

int main(int argc, char** argv) { return beliefnet::run_cli(argc, argv, std::cout, std::cerr); }
