#include <iostream>

#include "squab/cli.h"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return squab::run_cli(args, std::cout, std::cerr);
}
