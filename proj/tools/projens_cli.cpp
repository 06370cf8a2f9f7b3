#include <iostream>
#include <string>
#include <vector>

#include "projens/commands.hpp"

int main(int argc, char **argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return projens::run_cli(args, std::cout, std::cerr);
}
