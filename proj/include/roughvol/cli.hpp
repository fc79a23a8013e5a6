#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace roughvol {

/// Runs one CLI invocation. `args` excludes the program name. Returns 0 on
/// success, 1 on invalid input, 2 on runtime failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

}  // namespace roughvol
