#pragma once

#include <string>
#include <vector>

namespace conic {

/// Command-line driver. Exit codes: 0 success, 2 data or precondition
/// failure (bad input files, quotes the model cannot admit), 3 numerical
/// solver failure, 1 anything unexpected.
int run_cli(int argc, const char* const* argv);

/// Convenience overload for tests; args exclude the program name.
int run_cli(const std::vector<std::string>& args);

} // namespace conic
