#include <iostream>

#include "patchy/cli.hpp"

int main(int argc, char** argv)
{
    return patchy::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
