#include <kantomm/app.hpp>

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    const std::vector<std::string> args(argv + 1, argv + argc);
    return kantomm::app::run(args, std::cout, std::cerr);
}
