#pragma once

#include <string>
#include <vector>

namespace elmap::cli {

// Runs the `elmap` command line with args (args[0] is the program name) and returns the exit code:
// 0 success, 1 usage, 2 input/parse, 3 capability.
int run(const std::vector<std::string>& args);

}  // namespace elmap::cli
