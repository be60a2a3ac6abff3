#include "hpcsocial/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return hpcsocial::run_cli(argc, argv, std::cout, std::cerr);
}
