#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return triples::cli::main_entry(argc, argv, std::cout); }
