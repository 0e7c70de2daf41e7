#include <iostream>

#include "rprime/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return rprime::run_cli(args, std::cout, std::cerr);
}
