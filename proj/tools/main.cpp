#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return cpgenus::cli::run(argc, argv, std::cout, std::cerr); }
