#include <iostream>

#include "ncg_tools/cli.hpp"

int main(int argc, char** argv) { return ncg::cli::run(argc, argv, std::cout, std::cerr); }
