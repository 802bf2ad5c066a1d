#include <iostream>
#include <string>
#include <vector>

#include "cdbundle_cli/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cdbundle::cli::run(args, std::cout, std::cerr);
}
