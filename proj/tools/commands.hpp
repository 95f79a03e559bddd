#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mtkink::cli {

/// Runs one invocation. `args` excludes the program name. Returns the exit
/// status: 0 ok, 2 validation, 3 regime, 4 numerical.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mtkink::cli
