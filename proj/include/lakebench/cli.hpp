#pragma once

#include <ostream>
#include <span>
#include <string>

namespace lakebench {

// Runs one `lakebench` invocation. `args` excludes the program name.
// Returns 0 on success, 1 when a module operation fails, 2 on usage errors.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace lakebench
