#include "infolab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return infolab::cli::run(argc, argv, std::cout, std::cerr); }
