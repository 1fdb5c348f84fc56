#include <iostream>
#include <string>
#include <vector>

#include "erwd/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return erwd::run_cli(args, std::cout, std::cerr);
}
