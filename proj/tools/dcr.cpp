#include <iostream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dcr/cli.hpp"

int main(int argc, char** argv) {
    // Keep stdout for results.
    spdlog::set_default_logger(spdlog::stderr_color_mt("dcr"));
    std::vector<std::string> args(argv + 1, argv + argc);
    return dcr::cli_main(args, std::cout, std::cerr);
}
