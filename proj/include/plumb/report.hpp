#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plumb::cli {

// Dispatches a full command line (without the program name). Writes the
// report to `out` and diagnostics to `err`. Exit codes: 0 success, 1
// validation failure, 2 identity-check failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plumb::cli
