#include <iostream>

#include "hba_tools/cli.hpp"

int main(int argc, char** argv) { return hba::tools::run_cli(argc, argv, std::cout, std::cerr); }
