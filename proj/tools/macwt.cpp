#include <iostream>
#include <string>
#include <vector>

#include "macwt/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return macwt::cli::run(args, std::cout, std::cerr);
}
