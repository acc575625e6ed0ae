#include <iostream>

#include "gtr/cli.hpp"

int main(int argc, char** argv) { return gtr::run_cli(argc, argv, std::cout, std::cerr); }
