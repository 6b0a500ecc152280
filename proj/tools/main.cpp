#include <iostream>

#include "geoindex/cli.hpp"

int main(int argc, char** argv) { return geoindex::run_cli(argc, argv, std::cout, std::cerr); }
