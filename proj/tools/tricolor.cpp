#include <iostream>

#include "tricolor/cli.hpp"

int main(int argc, char** argv) {
    return tricolor::cli_main(argc, argv, std::cin, std::cout, std::cerr);
}
