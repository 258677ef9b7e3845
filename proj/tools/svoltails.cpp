#include <iostream>

#include "svoltails/cli.hpp"

int main(int argc, char** argv) { return svt::run_cli(argc, argv, std::cout, std::cerr); }
