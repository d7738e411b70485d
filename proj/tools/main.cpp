#include <iostream>

#include "timeflow/cli.hpp"

int main(int argc, char** argv) { return timeflow::cli::run(argc, argv, std::cout, std::cerr); }
