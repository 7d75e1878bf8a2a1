#include "shorsim/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return shorsim::cli::run(argc, argv, std::cout, std::cerr);
}
