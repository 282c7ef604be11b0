#include <iostream>

#include "cone_fixpoint/cli.hpp"

int main(int argc, char** argv) { return cone_fixpoint::run_cli(argc, argv, std::cout, std::cerr); }
