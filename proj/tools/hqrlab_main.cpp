#include <iostream>
#include <string>
#include <vector>

#include "hqrlab/cli.hpp"

int main(int argc, char** argv) {
    return hqrlab::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
