#include <iostream>
#include <string>
#include <vector>

#include "cluspath/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return cluspath::cli::run(args, std::cout, std::cerr);
}
