#include <iostream>

#include "hsprop/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hsprop::cli::run(args, std::cout);
}
