#include <iostream>

#include "tracknet/cli.hpp"

int main(int argc, char** argv) { return tracknet::run_cli(argc, argv, std::cout, std::cerr); }
