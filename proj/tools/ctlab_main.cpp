#include "ctlab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ctlab::cli::run(argc, argv, std::cout, std::cerr); }
