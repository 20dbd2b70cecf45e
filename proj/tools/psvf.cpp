#include <iostream>

#include "psvf/cli.hpp"

int main(int argc, char** argv) { return psvf::cli::run(argc, argv, std::cout, std::cerr); }
