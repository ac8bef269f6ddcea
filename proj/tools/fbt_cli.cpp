#include <iostream>

#include "fbt/cli.hpp"

int main(int argc, char** argv) { return fbt::cli::run(argc, argv, std::cout, std::cerr); }
