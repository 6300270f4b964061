#include <iostream>

#include "weaklab/cli.hpp"

int main(int argc, char** argv) {
    return weaklab::cli::run(argc, argv, std::cout, std::cerr);
}
