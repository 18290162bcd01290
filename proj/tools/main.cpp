#include <iostream>
#include <string>
#include <vector>

#include "mtlmcrack/cli.hpp"

int main(int argc, char** argv)
{
    return mtlmcrack::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
