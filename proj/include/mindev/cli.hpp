#pragma once

#include <string>
#include <vector>

namespace mindev {

// Command-line entry point.  Exit codes: 0 success (solve: converged;
// check: bayesian), 1 usage/parse/validation error, 2 gap not reached,
// 3 strategy improper.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace mindev
