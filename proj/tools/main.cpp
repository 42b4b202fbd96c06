#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return qstego::cli::run(argc, argv, std::cout, std::cerr); }
