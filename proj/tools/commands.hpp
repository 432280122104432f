#pragma once

#include <string>
#include <vector>

namespace ofr::cli {

struct Options {
    std::string config;
    std::vector<std::string> overrides;
    std::string out;
    int workers = 1;
    bool with_decay = false;  // adiabaticity only
    std::string figure;       // reproduce only
};

// Runs one subcommand; throws ofr::Error subclasses on failure.
void run_command(const std::string& command, const Options& opt);

}  // namespace ofr::cli
