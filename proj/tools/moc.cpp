#include <iostream>
#include <string>
#include <vector>

#include "moc/session.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return moc::run_command(args, std::cout, std::cerr);
}
