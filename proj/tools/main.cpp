#include <iostream>
#include <string>
#include <vector>

#include "dthp/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return dthp::cli::dispatch(args, std::cout, std::cerr);
}
