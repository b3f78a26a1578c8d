#include <iostream>

#include "dpd2s/cli.hpp"

int main(int argc, char** argv) { return dpd2s::cli::run(argc, argv, std::cout, std::cerr); }
