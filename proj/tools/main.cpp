#include <iostream>

#include "mtjsc/cli.hpp"

int main(int argc, char** argv) {
    return mtjsc::cli::main_entry(argc, argv, std::cout, std::cerr);
}
