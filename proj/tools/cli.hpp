#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace codeeff::cli {

// Runs one command line (argv[0] is the program name). Returns the exit
// code: 0 on success, 1 when the operation fails, 2 for bad usage.
int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace codeeff::cli
