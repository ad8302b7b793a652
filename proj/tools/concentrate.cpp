#include "concentrate/cli.hpp"

#include <iostream>

int main(int argc, char **argv) {
    std::ios::sync_with_stdio(false);
    return concentrate::parse_and_dispatch({argv + 1, argv + argc}, std::cout, std::cerr);
}
