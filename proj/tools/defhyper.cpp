#include <iostream>

#include "defhyper/cli.hpp"

int main(int argc, char** argv) { return defhyper::run_cli(argc, argv, std::cout, std::cerr); }
