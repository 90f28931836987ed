#include <iostream>

#include "taglm_cli/cli.hpp"

int main(int argc, char** argv) { return taglm::cli::run_cli(argc, argv, std::cout, std::cerr); }
