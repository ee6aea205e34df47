#include <iostream>

#include "ddm/cli.hpp"

int main(int argc, char** argv)
{
    return ddm::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
