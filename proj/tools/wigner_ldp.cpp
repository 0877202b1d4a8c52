#include <string>
#include <vector>

#include "wldp/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return wldp::cli::run(args);
}
