// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "chicrit/cli.hpp"

int main(int argc, char** argv) {
    return chicrit::cli::run(argc, argv, std::cout, std::cerr);
}
