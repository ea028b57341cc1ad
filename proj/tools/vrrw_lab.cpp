#include <iostream>

#include "vrrw/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return vrrw::run_cli(args, std::cout, std::cerr);
}
