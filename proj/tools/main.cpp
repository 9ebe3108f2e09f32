#include <iostream>

#include "torfact/cli/dispatch.hpp"

int main(int argc, char** argv) { return torfact::cli::run(argc, argv, std::cout, std::cerr); }
