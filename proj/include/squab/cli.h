#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace squab {

/// Runs the `squab` command line. `args` excludes the program name.
/// Returns 0 on success, 1 on runtime or validation failure, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace squab
