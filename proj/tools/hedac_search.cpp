#include <iostream>

#include "hedac/cli.hpp"

int main(int argc, char** argv) { return hedac::run_cli(argc, argv, std::cout, std::cerr); }
