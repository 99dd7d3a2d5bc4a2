#include <iostream>
#include <string>
#include <vector>

#include "catform/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return catform::cli::run(args, std::cout, std::cerr);
}
