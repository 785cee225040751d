#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gatehold {

/// Runs one `gatehold` invocation. `args` excludes the program name.
/// Returns the process exit code; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, const char* const* argv);

}  // namespace gatehold
