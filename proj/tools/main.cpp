#include <iostream>

#include "sladm_cli/commands.hpp"

int main(int argc, char** argv) { return sladm::cli::run_cli(argc, argv, std::cout, std::cerr); }
