#include <iostream>

#include "abducto/cli/cli.hpp"

int main(int argc, char** argv) { return abducto::cli::run(argc, argv, std::cout, std::cerr); }
