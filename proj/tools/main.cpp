#include <string>
#include <vector>

#include "eqmine/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return eqmine::run_cli(args);
}
