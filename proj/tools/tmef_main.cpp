#include <iostream>

#include "tmef/cli.hpp"

int main(int argc, char** argv) { return tmef::cli::run_cli(argc, argv, std::cout, std::cerr); }
