#include <iostream>

#include "mgsp/cli.hpp"

int main(int argc, char** argv) { return mgsp::cli_dispatch(argc, argv, std::cout, std::cerr); }
