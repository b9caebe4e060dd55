#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plateau::cli {

// Runs the command line (without the program name). Returns the exit code:
// 0 ok, 1 failed check, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Cross-method checks behind `verify`. Writes the report to out.
int run_verify(bool full, std::ostream& out);

}  // namespace plateau::cli
