#include <iostream>

#include "rrc/cli.hpp"

int main(int argc, char** argv) { return rrc::run_cli(argc, argv, std::cout, std::cerr); }
