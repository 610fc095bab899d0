#include <iostream>

#include "qcoin/cli.hpp"

int main(int argc, char** argv) { return qcoin::cli::run(argc, argv, std::cout, std::cerr); }
