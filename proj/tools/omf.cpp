// CLI entry point; subcommands are wired up as the library grows.
#include <iostream>

#include "omf/lattice.hpp"

int main(int argc, char** argv) {
    (void)argc;
    (void)argv;
    std::cout << "omf\n";
    return 0;
}
