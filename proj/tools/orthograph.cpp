#include <iostream>

#include "orthograph/cli.hpp"

int main(int argc, char** argv) { return orthograph::cli::run(argc, argv, std::cout, std::cerr); }
