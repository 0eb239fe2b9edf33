#include <iostream>
#include <string>
#include <vector>

#include "plumb/report.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return plumb::cli::run(args, std::cout, std::cerr);
}
