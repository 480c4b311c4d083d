#include "coulomb/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const auto res = coulomb::cli::run_command(args);
    (res.exit_code == 0 ? std::cout : std::cerr) << res.output;
    return res.exit_code;
}
