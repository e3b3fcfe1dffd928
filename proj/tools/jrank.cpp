#include <iostream>
#include <string>
#include <vector>

#include "jrank/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return jrank::cli::run(args, std::cout, std::cerr);
}
