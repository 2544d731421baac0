#include <iostream>

#include "qmac/cli.hpp"

int main(int argc, char** argv) { return qmac::cli::run(argc, argv, std::cout, std::cerr); }
