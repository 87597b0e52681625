#include <iostream>

#include "mipd/cli.hpp"

int main(int argc, char **argv) { return mipd::cli::run(argc, argv, std::cout, std::cerr); }
